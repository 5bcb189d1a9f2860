#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "netsteer/analytic.hpp"
#include "netsteer/errors.hpp"
#include "netsteer/optimizer.hpp"
#include "support.hpp"

using namespace netsteer;

namespace {

// Parameters reproducing the d=2, N=2 model with pure states at v = 1/sqrt2.
void set_pure_lhs_parameters(ParametrizedModel& m) {
  auto& theta = m.parameters();
  const auto& blocks = m.blocks();
  std::fill(theta.begin(), theta.end(), 0.0);
  const double big = 40.0;
  const auto& resp = blocks[1];
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t l = 0; l < 4; ++l) {
      const std::size_t a = x == 0 ? l / 2 : l % 2;
      theta[resp.offset + (x * 4 + l) * 2 + a] = big;
    }
  }
  const auto& st = blocks[2];
  for (std::size_t l = 0; l < 4; ++l) {
    const double sz = l / 2 == 0 ? 1.0 : -1.0;
    const double sx = l % 2 == 0 ? 1.0 : -1.0;
    // Bloch vector (sx, 0, sz)/sqrt2
    const double angle = std::atan2(sx, sz);
    theta[st.offset + l * 4 + 0] = std::cos(angle / 2);
    theta[st.offset + l * 4 + 2] = std::sin(angle / 2);
  }
}

}  // namespace

TEST(ParametrizedModel, BlocksFollowCausalStructure) {
  const auto s = bilocal_scenario(0.5, 0.5);
  ParametrizedModel m(ModelShape::make(s, {{4, 4}}), 0);
  ASSERT_EQ(m.blocks().size(), 5u);
  EXPECT_EQ(m.blocks()[2].kind, BlockKind::response);
  EXPECT_EQ(m.blocks()[2].rows, 16u);
  EXPECT_EQ(m.blocks()[2].width, 4u);
  EXPECT_EQ(m.blocks()[3].rows, 4u);
  EXPECT_EQ(m.blocks()[3].width, 4u);
  EXPECT_EQ(m.parameter_count(), 4u + 4 + 64 + 16 + 16);

  const auto ghz = ghz_one_untrusted_scenario(2, 0.5);
  const auto pm = build_parametrized_model(ghz, default_hidden_spec(ScenarioKind::one_untrusted, 2, 2), 0, 3);
  const auto model = pm.forward();
  EXPECT_EQ(model.hidden_states.size(), 2u);
  EXPECT_EQ(model.hidden_states[0].size(), 8u);
  EXPECT_NO_THROW(model.validate());
}

TEST(ParametrizedModel, ForwardAlwaysValid) {
  std::mt19937_64 rng(5);
  const Scenario scenarios[] = {bipartite_scenario(3, 2, 0.5), ghz_two_untrusted_scenario(2, 0.5),
                                bilocal_scenario(0.5, 0.5)};
  for (const auto& s : scenarios) {
    for (std::size_t width : {0u, 6u}) {
      ParametrizedModel m(ModelShape::make(s, {std::vector<std::size_t>(s.topology.source_count, 3)}),
                          width);
      m.randomize(rng, 3.0);
      const auto model = m.forward();
      EXPECT_NO_THROW(model.validate());
      EXPECT_NO_THROW(model_assemblage(model, s).validate(1e-12));
    }
  }
}

TEST(Loss, ZeroForExactModel) {
  const auto s = bipartite_scenario(2, 2, 1.0 / std::sqrt(2.0));
  ParametrizedModel m(ModelShape::make(s, {{4}}), 0);
  set_pure_lhs_parameters(m);
  const auto v = loss(m, compute_assemblage(s), 10.0, 1e-12);
  EXPECT_LT(v.distance, 1e-12);
  EXPECT_LT(v.residual, 1e-12);
  EXPECT_LT(v.loss, 1e-10);
}

TEST(Loss, MatchesClosedFormAtFullVisibility) {
  const auto s = bipartite_scenario(2, 2, 1.0);
  ParametrizedModel m(ModelShape::make(s, {{4}}), 0);
  set_pure_lhs_parameters(m);
  const auto v = loss(m, compute_assemblage(s), 100.0, 1e-12);
  EXPECT_NEAR(v.distance, (1.0 - 1.0 / std::sqrt(2.0)) / 2.0, 1e-12);
  EXPECT_LT(v.residual, 1e-12);
  EXPECT_NEAR(v.loss, 0.1464466, 1e-6);
}

TEST(Loss, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(8);
  const Scenario scenarios[] = {bipartite_scenario(2, 2, 0.9), bipartite_scenario(3, 3, 0.7),
                                ghz_one_untrusted_scenario(2, 0.6), ghz_two_untrusted_scenario(2, 0.8),
                                bilocal_scenario(0.9, 0.7)};
  for (const auto& s : scenarios) {
    const auto target = compute_assemblage(s);
    for (std::size_t width : {0u, 5u}) {
      ParametrizedModel m(ModelShape::make(s, {std::vector<std::size_t>(s.topology.source_count, 3)}),
                          width);
      m.randomize(rng, 1.0);
      const auto check = test_support::check_gradient(m, target, 7.0, 1e-8, 20, rng);
      EXPECT_LT(check.worst_relative, 1e-4) << "width " << width;
    }
  }
}

TEST(Loss, RejectsMismatchedTarget) {
  const auto s = bipartite_scenario(2, 2, 0.5);
  ParametrizedModel m(ModelShape::make(s, {{4}}), 0);
  EXPECT_THROW(loss(m, compute_assemblage(bipartite_scenario(2, 3, 0.5)), 1.0, 1e-8), StructuralError);
}

TEST(Optimize, BipartiteInsideLhsRegion) {
  const auto s = bipartite_scenario(2, 2, 0.5);
  OptimizerConfig cfg;
  const auto r = optimize(compute_assemblage(s), s, {{4}}, cfg);
  EXPECT_LT(r.value, 5e-4);
  EXPECT_LT(assemblage_distance(model_assemblage(r.best_model, s), compute_assemblage(s)), 1e-3);
}

TEST(Optimize, BipartiteFullVisibility) {
  const auto s = bipartite_scenario(2, 2, 1.0);
  OptimizerConfig cfg;
  const auto r = optimize(compute_assemblage(s), s, {{4}}, cfg);
  EXPECT_NEAR(r.value, 0.146447, 5e-3);
  EXPECT_LT(r.residual, 1e-4);
  EXPECT_EQ(r.restart_values.size(), cfg.restarts);
}

TEST(Optimize, BilocalBelowThreshold) {
  const auto s = bilocal_scenario(0.9, 0.2);
  OptimizerConfig cfg;
  const auto r = optimize(compute_assemblage(s), s, {{4, 4}}, cfg);
  EXPECT_LT(r.value, 5e-4);
}

TEST(Optimize, BilocalLowVisibilityLeavesUncorrelatedSaddle) {
  const auto s = bilocal_scenario(1.0 / 14.0, 1.0 / 14.0);
  OptimizerConfig cfg;
  cfg.restarts = 2;
  const auto r = optimize(compute_assemblage(s), s, {{4, 4}}, cfg);
  EXPECT_LT(r.value, 5e-5);
}

TEST(Optimize, SameSeedIsReproducible) {
  const auto s = bipartite_scenario(2, 2, 0.9);
  OptimizerConfig cfg;
  cfg.iterations = 600;
  cfg.restarts = 2;
  cfg.seed = 17;
  const auto a = optimize(compute_assemblage(s), s, {{4}}, cfg);
  const auto b = optimize(compute_assemblage(s), s, {{4}}, cfg);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.best_parameters, b.best_parameters);
  cfg.seed = 18;
  const auto c = optimize(compute_assemblage(s), s, {{4}}, cfg);
  EXPECT_NE(a.best_parameters, c.best_parameters);
}

TEST(Optimize, TraceSinkReceivesPoints) {
  const auto s = bipartite_scenario(2, 2, 0.9);
  OptimizerConfig cfg;
  cfg.iterations = 300;
  cfg.restarts = 1;
  std::vector<LossTracePoint> points;
  optimize(compute_assemblage(s), s, {{4}}, cfg, [&](const LossTracePoint& p) { points.push_back(p); }, 50);
  ASSERT_FALSE(points.empty());
  EXPECT_EQ(points.front().iteration, 0u);
  EXPECT_EQ(points[1].iteration, 50u);
}

TEST(Optimize, ConfigValidation) {
  OptimizerConfig cfg;
  cfg.restarts = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = OptimizerConfig{};
  cfg.beta_schedule.clear();
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = OptimizerConfig{};
  cfg.lr_decay = 1.5;
  EXPECT_THROW(cfg.validate(), DomainError);
}
