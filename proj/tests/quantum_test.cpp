#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "netsteer/errors.hpp"
#include "netsteer/quantum.hpp"

using namespace netsteer;

namespace {

ComplexMatrix sum_of(const Povm& p) {
  ComplexMatrix s(p.dimension(), p.dimension());
  for (const auto& e : p.elements) s += e;
  return s;
}

}  // namespace

TEST(Quantum, IsotropicExamples) {
  EXPECT_LE(max_abs_diff(isotropic_state(2, 0.0).matrix, ComplexMatrix::identity(4) * 0.25), 1e-15);
  EXPECT_LE(max_abs_diff(isotropic_state(2, 1.0).matrix,
                         ComplexMatrix::projector(maximally_entangled(2))),
            1e-15);
  const auto half = isotropic_state(2, 0.5).matrix;
  EXPECT_NEAR(half(0, 0).real(), 3.0 / 8, 1e-15);
  EXPECT_NEAR(half(1, 1).real(), 1.0 / 8, 1e-15);
  EXPECT_NEAR(half(2, 2).real(), 1.0 / 8, 1e-15);
  EXPECT_NEAR(half(3, 3).real(), 3.0 / 8, 1e-15);
  EXPECT_NEAR(half(0, 3).real(), 0.25, 1e-15);
  EXPECT_NEAR(half(3, 0).real(), 0.25, 1e-15);
  EXPECT_EQ(isotropic_state(3, 0.2).dims, (Dims{3, 3}));
  EXPECT_THROW(isotropic_state(2, 1.5), DomainError);
  EXPECT_THROW(isotropic_state(2, -0.1), DomainError);
}

TEST(Quantum, IsotropicIsAffineInVisibility) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t d = 2; d <= 5; ++d) {
    const auto s0 = isotropic_state(d, 0.0).matrix;
    const auto s1 = isotropic_state(d, 1.0).matrix;
    for (int k = 0; k < 10; ++k) {
      const double v = u(rng);
      EXPECT_LE(max_abs_diff(isotropic_state(d, v).matrix, s1 * v + s0 * (1.0 - v)), 1e-12);
    }
  }
}

TEST(Quantum, NoisyGhzExamples) {
  EXPECT_LE(max_abs_diff(noisy_ghz(0.0).matrix, ComplexMatrix::identity(8) * 0.125), 1e-15);
  const auto one = noisy_ghz(1.0).matrix;
  EXPECT_NEAR(one(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(one(7, 7).real(), 0.5, 1e-15);
  EXPECT_NEAR(one(0, 7).real(), 0.5, 1e-15);
  EXPECT_NEAR(one.trace().real(), 1.0, 1e-15);
  const auto half = noisy_ghz(0.5).matrix;
  EXPECT_NEAR(half(0, 7).real(), 0.25, 1e-15);
  EXPECT_NEAR(half(7, 0).real(), 0.25, 1e-15);
  EXPECT_NEAR(half(0, 0).real(), 5.0 / 16, 1e-15);
  EXPECT_NEAR(half(7, 7).real(), 5.0 / 16, 1e-15);
  for (std::size_t i = 1; i < 7; ++i) EXPECT_NEAR(half(i, i).real(), 1.0 / 16, 1e-15);
  EXPECT_EQ(noisy_ghz(0.3).dims, (Dims{2, 2, 2}));
  EXPECT_THROW(noisy_ghz(2.0), DomainError);
}

TEST(Quantum, RandomVisibilitiesGiveValidStates) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double v = u(rng);
    EXPECT_NO_THROW(isotropic_state(2 + k % 4, v).validate());
    EXPECT_NO_THROW(noisy_ghz(v).validate());
  }
}

TEST(Quantum, QubitMubsAreZXY) {
  const auto fam = mub_family(2, 3);
  ASSERT_EQ(fam.bases.size(), 3u);
  const ComplexMatrix paulis[] = {pauli::z(), pauli::x(), pauli::y()};
  for (std::size_t b = 0; b < 3; ++b) {
    const auto povm = projective_povm(fam.bases[b]);
    const auto plus = (ComplexMatrix::identity(2) + paulis[b]) * 0.5;
    const auto minus = (ComplexMatrix::identity(2) - paulis[b]) * 0.5;
    EXPECT_LE(max_abs_diff(povm.elements[0], plus), 1e-12) << "basis " << b;
    EXPECT_LE(max_abs_diff(povm.elements[1], minus), 1e-12) << "basis " << b;
  }
}

TEST(Quantum, MubInvariantHoldsForAllSupportedFamilies) {
  for (std::size_t d = 2; d <= 5; ++d) {
    for (std::size_t count = 1; count <= d + 1; ++count) {
      const auto fam = mub_family(d, count);
      ASSERT_EQ(fam.bases.size(), count);
      EXPECT_LE(fam.max_overlap_error(), 1e-9) << "d=" << d << " count=" << count;
      for (const auto& basis : fam.bases) {
        const auto povm = projective_povm(basis);
        EXPECT_NO_THROW(povm.validate());
      }
    }
  }
}

TEST(Quantum, MubFirstBasisIsComputational) {
  for (std::size_t d = 2; d <= 5; ++d) {
    const auto fam = mub_family(d, 2);
    for (std::size_t k = 0; k < d; ++k) {
      const auto e = computational_ket(d, k);
      EXPECT_NEAR(std::abs(inner(e, fam.bases[0][k])), 1.0, 1e-12);
    }
  }
}

TEST(Quantum, MubRejectsUnsupportedRequests) {
  EXPECT_THROW(mub_family(6, 2), DomainError);
  EXPECT_THROW(mub_family(1, 1), DomainError);
  EXPECT_THROW(mub_family(3, 5), DomainError);
  EXPECT_THROW(mub_family(2, 0), DomainError);
}

TEST(Quantum, ProjectivePovmExamples) {
  const Basis comp{computational_ket(2, 0), computational_ket(2, 1)};
  const auto z = projective_povm(comp);
  EXPECT_EQ(z.outcome_count(), 2u);
  EXPECT_LE(max_abs_diff(z.elements[0], ComplexMatrix::diagonal(std::vector<double>{1, 0})), 1e-15);
  EXPECT_LE(max_abs_diff(z.elements[1], ComplexMatrix::diagonal(std::vector<double>{0, 1})), 1e-15);

  const double r = 1.0 / std::sqrt(2.0);
  const auto x = projective_povm(Basis{{r, r}, {r, -r}});
  EXPECT_LE(max_abs_diff(x.elements[0], (ComplexMatrix::identity(2) + pauli::x()) * 0.5), 1e-15);
  EXPECT_LE(max_abs_diff(x.elements[1], (ComplexMatrix::identity(2) - pauli::x()) * 0.5), 1e-15);

  EXPECT_THROW(projective_povm(Basis{{1.0, 0.0}, {r, r}}), PreconditionError);
  EXPECT_THROW(projective_povm(Basis{{1.0, 0.0}}), PreconditionError);
}

TEST(Quantum, BellStateMeasurement) {
  const auto bsm = bell_state_measurement();
  ASSERT_EQ(bsm.outcome_count(), 4u);
  EXPECT_LE(max_abs_diff(sum_of(bsm), ComplexMatrix::identity(4)), 1e-15);
  for (const auto& e : bsm.elements) {
    EXPECT_NEAR(e.trace().real(), 1.0, 1e-15);
    const auto w = hermitian_eigenvalues(e);
    EXPECT_NEAR(w[2], 0.0, 1e-12);
    EXPECT_NEAR(w[3], 1.0, 1e-12);
  }
  EXPECT_LE(max_abs_diff(bsm.elements[0], ComplexMatrix::projector(maximally_entangled(2))), 1e-15);
  const auto bell = bell_states();
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(bell[1][3].real(), -r, 1e-15);
  EXPECT_NEAR(bell[2][1].real(), r, 1e-15);
  EXPECT_NEAR(bell[3][2].real(), -r, 1e-15);
}

TEST(Quantum, PovmValidateRejectsIncompleteSets) {
  Povm p{{ComplexMatrix::diagonal(std::vector<double>{1, 0})}};
  EXPECT_THROW(p.validate(), PreconditionError);
  Povm neg{{ComplexMatrix::diagonal(std::vector<double>{1.5, 0}),
            ComplexMatrix::diagonal(std::vector<double>{-0.5, 1})}};
  EXPECT_THROW(neg.validate(), PreconditionError);
}
