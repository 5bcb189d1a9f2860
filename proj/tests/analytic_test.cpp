#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "netsteer/analytic.hpp"
#include "netsteer/errors.hpp"

using namespace netsteer;

namespace {

double max_member_diff(const Assemblage& a, const Assemblage& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.member_count(); ++i) {
    worst = std::max(worst, max_abs_diff(a.member(i), b.member(i)));
  }
  return worst;
}

}  // namespace

TEST(LocalModel, UniformModelGivesScaledFixedState) {
  const auto s = bipartite_scenario(3, 2, 0.4);
  LocalModel m = LocalModel::empty(ModelShape::make(s, {{5}}));
  m.source_distributions[0].assign(5, 0.2);
  m.responses[0].assign(m.responses[0].size(), 1.0 / 3);
  const auto zero = ComplexMatrix::projector(computational_ket(3, 0));
  for (auto& st : m.hidden_states[0]) st = zero;
  m.validate();
  const auto a = model_assemblage(m, s);
  for (const auto& member : a.members()) EXPECT_LE(max_abs_diff(member, zero * (1.0 / 3)), 1e-15);
}

TEST(LocalModel, ShapeFollowsTopology) {
  const auto bilocal = ModelShape::make(bilocal_scenario(0.5, 0.5), {{4, 4}});
  EXPECT_EQ(bilocal.untrusted_lambda_count, (std::vector<std::size_t>{16}));
  EXPECT_EQ(bilocal.trusted_lambda_count, (std::vector<std::size_t>{4, 4}));
  // input (l1, l2) = (2, 3) is flat 11; party A sees 11, B1 sees 2, B2 sees 3
  EXPECT_EQ(bilocal.untrusted_index[11], (std::vector<std::size_t>{11}));
  EXPECT_EQ(bilocal.trusted_index[11], (std::vector<std::size_t>{2, 3}));

  const auto ghz = ModelShape::make(ghz_one_untrusted_scenario(2, 0.5),
                                    default_hidden_spec(ScenarioKind::one_untrusted, 2, 2));
  EXPECT_EQ(ghz.hidden.cardinalities, (std::vector<std::size_t>{8}));
  EXPECT_EQ(ghz.trusted_dimension(), 4u);

  EXPECT_THROW(ModelShape::make(bilocal_scenario(0.5, 0.5), {{4}}), StructuralError);
  EXPECT_EQ(default_hidden_spec(ScenarioKind::bipartite, 5, 3).cardinalities,
            (std::vector<std::size_t>{125}));
  EXPECT_EQ(default_hidden_spec(ScenarioKind::two_untrusted, 2, 3).cardinalities,
            (std::vector<std::size_t>{64}));
}

TEST(LocalModel, RejectsMismatchedScenario) {
  const auto m = lhs_model_d2n2(0.5);
  EXPECT_THROW(model_assemblage(m, bipartite_scenario(2, 3, 0.5)), StructuralError);
  EXPECT_THROW(model_assemblage(m, bipartite_scenario(3, 2, 0.5)), StructuralError);
}

TEST(LocalModel, RandomModelsGiveValidAssemblages) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Scenario scenarios[] = {bipartite_scenario(3, 3, 0.5), ghz_one_untrusted_scenario(3, 0.5),
                                ghz_two_untrusted_scenario(2, 0.5), bilocal_scenario(0.5, 0.5)};
  for (const auto& s : scenarios) {
    LocalModel m = LocalModel::empty(ModelShape::make(s, {std::vector<std::size_t>(s.topology.source_count, 3)}));
    for (auto& p : m.source_distributions) {
      double sum = 0.0;
      for (auto& v : p) sum += (v = u(rng));
      for (auto& v : p) v /= sum;
    }
    for (std::size_t j = 0; j < m.responses.size(); ++j) {
      const std::size_t o = s.topology.outcomes[j];
      for (std::size_t row = 0; row < m.responses[j].size() / o; ++row) {
        double sum = 0.0;
        for (std::size_t a = 0; a < o; ++a) sum += (m.responses[j][row * o + a] = u(rng));
        for (std::size_t a = 0; a < o; ++a) m.responses[j][row * o + a] /= sum;
      }
    }
    for (auto& bank : m.hidden_states) {
      for (auto& st : bank) {
        const std::size_t d = st.rows();
        ComplexMatrix g(d, d);
        for (auto& e : g.entries()) e = Complex(u(rng) - 0.5, u(rng) - 0.5);
        st = g * g.adjoint();
        st *= 1.0 / st.trace().real();
      }
    }
    m.validate();
    EXPECT_NO_THROW(model_assemblage(m, s).validate(1e-12));
  }
}

TEST(Analytic, Table1Entries) {
  const auto e22 = table1(2, 2);
  EXPECT_NEAR(e22.threshold, 0.70710678118654752, 1e-15);
  EXPECT_DOUBLE_EQ(e22.slope, 0.5);
  EXPECT_NEAR(e22.steerability(1.0), 0.5 * (1.0 - 1.0 / std::sqrt(2.0)), 1e-15);
  EXPECT_EQ(e22.steerability(0.6), 0.0);
  EXPECT_NEAR(table1(3, 3).threshold, 0.5686, 5e-5);
  EXPECT_DOUBLE_EQ(table1(3, 3).slope, 2.0 / 3.0);
  EXPECT_NEAR(table1(5, 2).threshold, 0.6545, 5e-5);
  EXPECT_DOUBLE_EQ(table1(5, 2).slope, 0.8);
  const double printed[] = {0.7071, 0.6830, 0.6667, 0.6545, 0.5774, 0.5686, 0.5556, 0.5393};
  const auto all = table1_entries();
  ASSERT_EQ(all.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_NEAR(all[i].threshold, printed[i], 5e-5);
    EXPECT_EQ(all[i].slope, static_cast<double>(all[i].dimension - 1) / all[i].dimension);
    EXPECT_EQ(all[i].steerability(all[i].threshold), 0.0);
    EXPECT_GT(all[i].steerability(all[i].threshold + 1e-3), 0.0);
  }
  EXPECT_THROW(table1(6, 2), DomainError);
  EXPECT_THROW(table1(2, 4), DomainError);
}

TEST(Analytic, LhsModelReproducesIsotropicBelowThreshold) {
  for (double v : {0.0, 0.25, 0.5, 0.7, 1.0 / std::sqrt(2.0)}) {
    const auto m = lhs_model_d2n2(v);
    m.validate();
    const auto target = compute_assemblage(bipartite_scenario(2, 2, v));
    EXPECT_LT(assemblage_distance(model_assemblage(m), target), 1e-12) << "v=" << v;
  }
}

TEST(Analytic, LhsModelDistanceMatchesClosedForm) {
  const auto entry = table1(2, 2);
  for (int i = 0; i <= 100; ++i) {
    const double v = i / 100.0;
    const auto target = compute_assemblage(bipartite_scenario(2, 2, v));
    const double dist = assemblage_distance(model_assemblage(lhs_model_d2n2(v)), target);
    EXPECT_NEAR(dist, entry.steerability(v), 1e-12) << "v=" << v;
  }
}

TEST(Analytic, LhsModelStatesTouchPsdBoundary) {
  const auto m = lhs_model_d2n2(1.0 / std::sqrt(2.0));
  for (const auto& st : m.hidden_states[0]) EXPECT_NEAR(min_eigenvalue(st), 0.0, 1e-15);
}

TEST(Analytic, XiZetaBranches) {
  auto b1 = xizeta(0.5, 0.3);
  EXPECT_EQ(b1.branch, 1);
  EXPECT_DOUBLE_EQ(b1.xi, 0.5);
  EXPECT_DOUBLE_EQ(b1.zeta, 0.3);
  auto b2 = xizeta(0.9, 0.2);
  EXPECT_EQ(b2.branch, 2);
  EXPECT_NEAR(b2.xi, std::sqrt(0.162), 1e-15);
  EXPECT_NEAR(b2.zeta, std::sqrt(0.2), 1e-15);
  auto b3 = xizeta(0.7, 0.45);
  EXPECT_EQ(b3.branch, 3);
  EXPECT_NEAR(b3.xi, std::sqrt(0.315), 1e-15);
  EXPECT_NEAR(b3.zeta, std::sqrt(0.315), 1e-15);
  auto sw = xizeta(0.2, 0.9);
  EXPECT_TRUE(sw.swapped);
  EXPECT_EQ(sw.branch, 2);
  EXPECT_THROW(xizeta(0.9, 0.4), DomainError);
  EXPECT_THROW(xizeta(1.1, 0.1), DomainError);
}

TEST(Analytic, XiZetaBranchesAgreeOnBoundaries) {
  const double s3 = 1.0 / std::sqrt(3.0);
  // v = 1/sqrt3: branches 1 and 2 coincide in the product
  for (double w : {0.0, 0.1, 0.2, 1.0 / 3.0}) {
    const auto p = xizeta(s3, w);
    EXPECT_NEAR(p.xi * p.zeta, s3 * w, 1e-15);
    EXPECT_LE(std::abs(p.xi), s3 + 1e-15);
    EXPECT_LE(std::abs(p.zeta), s3 + 1e-15);
  }
  const auto on = xizeta(0.9, 1.0 / 3.0);
  EXPECT_EQ(on.branch, 2);
  EXPECT_NEAR(on.xi, std::sqrt(0.9 * 0.9 / 3.0), 1e-15);
}

TEST(Analytic, NlhsModelReplaysOnRandomRegionPoints) {
  std::mt19937_64 rng(500);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 500) {
    const double v = u(rng), w = u(rng);
    if (v * w > 1.0 / 3.0) continue;
    ++checked;
    const auto xz = xizeta(v, w);
    EXPECT_NEAR(xz.xi * xz.zeta, v * w, 1e-15);
    const auto m = nlhs_model_bilocal(v, w);
    for (const auto& bank : m.hidden_states) {
      for (const auto& st : bank) EXPECT_GE(min_eigenvalue(st), -1e-12);
    }
    const auto replay = model_assemblage(m, bilocal_scenario(v, w));
    EXPECT_LT(assemblage_distance(replay, bilocal_assemblage(v, w)), 1e-12) << v << "," << w;
    EXPECT_LT(max_member_diff(replay, bilocal_assemblage(v, w)), 1e-12);
  }
}

TEST(Analytic, NlhsModelBoundaryAndOrigin) {
  const double s3 = 1.0 / std::sqrt(3.0);
  const auto edge = nlhs_model_bilocal(s3, s3);
  for (const auto& bank : edge.hidden_states) {
    for (const auto& st : bank) EXPECT_NEAR(min_eigenvalue(st), 0.0, 1e-12);
  }
  EXPECT_LT(assemblage_distance(model_assemblage(edge), bilocal_assemblage(s3, s3)), 1e-12);

  const auto origin = nlhs_model_bilocal(0.0, 0.0);
  for (const auto& bank : origin.hidden_states) {
    for (const auto& st : bank) EXPECT_LE(max_abs_diff(st, ComplexMatrix::identity(2) * 0.5), 1e-15);
  }
  const auto flat = model_assemblage(origin);
  for (const auto& m : flat.members()) {
    EXPECT_LE(max_abs_diff(m, ComplexMatrix::identity(4) * (1.0 / 16)), 1e-15);
  }

  // beyond 1/sqrt3 the states stop being PSD
  const auto outside = nlhs_model_bilocal_from(0.6, 0.6);
  EXPECT_LT(min_eigenvalue(outside.hidden_states[0][0]), -1e-3);
  EXPECT_THROW(outside.validate(), PreconditionError);
}

TEST(Analytic, ThresholdCurve) {
  const auto pts = bilocal_threshold_curve({{1.0, 1.0 / 3.0}, {1.0, 0.34}, {0.5, 0.5}});
  EXPECT_FALSE(pts[0].steerable);
  EXPECT_TRUE(pts[1].steerable);
  EXPECT_FALSE(pts[2].steerable);
  std::vector<std::pair<double, double>> grid;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) grid.emplace_back(i / 20.0, j / 20.0);
  }
  for (const auto& p : bilocal_threshold_curve(grid)) {
    if (p.v * p.w == 0.0) {
      EXPECT_FALSE(p.steerable);
      continue;
    }
    EXPECT_EQ(p.steerable, ppt_entangled(bilocal_assemblage(p.v, p.w).member(0)));
  }
}

TEST(Analytic, MultipartiteReferences) {
  EXPECT_NEAR(multipartite_threshold(ScenarioKind::one_untrusted, 2), 1.0 / 3, 1e-15);
  EXPECT_NEAR(multipartite_threshold(ScenarioKind::one_untrusted, 3), 0.2612038749637414, 1e-15);
  EXPECT_NEAR(multipartite_threshold(ScenarioKind::two_untrusted, 2), 2.0 / 3, 1e-15);
  EXPECT_NEAR(multipartite_threshold(ScenarioKind::two_untrusted, 3), 3.0 / 7, 1e-15);
  EXPECT_THROW(multipartite_threshold(ScenarioKind::bilocal, 2), DomainError);
  const auto csv = threshold_table_csv();
  EXPECT_NE(csv.find("bipartite,2,2,0.707106781187,0.5\n"), std::string::npos);
}
