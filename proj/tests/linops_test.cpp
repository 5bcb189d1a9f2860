#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "netsteer/errors.hpp"
#include "netsteer/linops.hpp"
#include "netsteer/quantum.hpp"

using namespace netsteer;

namespace {

ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    m(r, r) = g(rng);
    for (std::size_t c = r + 1; c < n; ++c) {
      m(r, c) = Complex(g(rng), g(rng));
      m(c, r) = std::conj(m(r, c));
    }
  }
  return m;
}

ComplexMatrix random_state(std::size_t n, std::mt19937_64& rng) {
  ComplexMatrix g = random_hermitian(n, rng);
  ComplexMatrix rho = g * g.adjoint();
  return rho * (1.0 / rho.trace().real());
}

ComplexMatrix phi_plus() { return ComplexMatrix::projector(maximally_entangled(2)); }

}  // namespace

TEST(Linops, ConstructionChecksEntryCount) {
  EXPECT_THROW(ComplexMatrix(2, 2, std::vector<Complex>(3)), StructuralError);
  const std::vector<double> re{1.5, -2.0, 0.25, 3.0};
  const std::vector<double> im{0.0, 1.0, -1.0, 0.5};
  const auto m = ComplexMatrix::from_real_imag(2, 2, re, im);
  EXPECT_EQ(m.real_parts(), re);
  EXPECT_EQ(m.imag_parts(), im);
}

TEST(Linops, TensorProductExamples) {
  EXPECT_EQ(tensor_product(ComplexMatrix::identity(2), ComplexMatrix::identity(2)),
            ComplexMatrix::identity(4));

  const auto p0 = ComplexMatrix::projector(computational_ket(2, 0));
  const auto p1 = ComplexMatrix::projector(computational_ket(2, 1));
  ComplexMatrix expected(4, 4);
  expected(1, 1) = 1.0;
  EXPECT_EQ(tensor_product(p0, p1), expected);

  // |Phi+> from kets |00> + |11>
  Ket k00 = tensor_product(computational_ket(2, 0), computational_ket(2, 0));
  Ket k11 = tensor_product(computational_ket(2, 1), computational_ket(2, 1));
  Ket phi(4);
  for (std::size_t i = 0; i < 4; ++i) phi[i] = (k00[i] + k11[i]) / std::sqrt(2.0);
  const auto proj = ComplexMatrix::projector(phi);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      const bool corner = (r == 0 || r == 3) && (c == 0 || c == 3);
      EXPECT_NEAR(std::abs(proj(r, c) - Complex(corner ? 0.5 : 0.0)), 0.0, 1e-15);
    }
  }
}

TEST(Linops, PartialTraceExamples) {
  const std::size_t keep_a[] = {0};
  EXPECT_LT(max_abs_diff(partial_trace(phi_plus(), {2, 2}, keep_a), ComplexMatrix::identity(2) * 0.5),
            1e-15);

  std::mt19937_64 rng(7);
  const auto ra = random_state(3, rng);
  const auto rb = random_state(2, rng);
  EXPECT_LT(max_abs_diff(partial_trace(tensor_product(ra, rb), {3, 2}, keep_a), ra), 1e-14);

  EXPECT_THROW(partial_trace(phi_plus(), {2, 3}, keep_a), StructuralError);
  EXPECT_THROW(partial_trace(ComplexMatrix(2, 3), {2}, keep_a), StructuralError);
}

TEST(Linops, PartialTraceOverMiddleFactorsOfChain) {
  // (B1, A1, A2, B2) with two |Phi+> pairs; projecting A1A2 onto |Phi+> and
  // tracing out leaves |Phi+><Phi+| / 4 on (B1, B2).
  const auto joint = tensor_product(phi_plus(), phi_plus());
  const auto m = tensor_product(
      std::vector<ComplexMatrix>{ComplexMatrix::identity(2), phi_plus(), ComplexMatrix::identity(2)});
  const std::size_t keep[] = {0, 3};
  const auto sigma = partial_trace(m * joint, {2, 2, 2, 2}, keep);
  EXPECT_LT(max_abs_diff(sigma, phi_plus() * 0.25), 1e-15);
}

TEST(Linops, PartialTransposeExamples) {
  const ComplexMatrix real_a = ComplexMatrix::diagonal(std::vector<double>{0.3, 0.7});
  ComplexMatrix real_b(2, 2, {0.5, 0.2, 0.2, 0.5});
  const auto prod = tensor_product(real_a, real_b);
  EXPECT_EQ(partial_transpose(prod, {2, 2}, 1), prod);

  std::mt19937_64 rng(3);
  const auto m = random_hermitian(6, rng);
  EXPECT_EQ(partial_transpose(partial_transpose(m, {2, 3}, 1), {2, 3}, 1), m);
  EXPECT_NEAR(min_eigenvalue(partial_transpose(phi_plus(), {2, 2}, 0)), -0.5, 1e-14);
  EXPECT_THROW(partial_transpose(m, {2, 2}, 0), StructuralError);
}

TEST(Linops, PermuteSubsystemsMovesFactors) {
  std::mt19937_64 rng(11);
  const auto a = random_state(2, rng);
  const auto b = random_state(3, rng);
  const std::size_t swap[] = {1, 0};
  EXPECT_LT(max_abs_diff(permute_subsystems(tensor_product(a, b), {2, 3}, swap), tensor_product(b, a)),
            1e-15);
}

TEST(Linops, HermitianEigExamples) {
  const auto z = hermitian_eig(pauli::z());
  EXPECT_NEAR(z.eigenvalues[0], -1.0, 1e-15);
  EXPECT_NEAR(z.eigenvalues[1], 1.0, 1e-15);
  for (double w : hermitian_eigenvalues(ComplexMatrix::identity(5))) EXPECT_NEAR(w, 1.0, 1e-15);
  const auto w = hermitian_eigenvalues(phi_plus());
  EXPECT_NEAR(w[0], 0.0, 1e-14);
  EXPECT_NEAR(w[1], 0.0, 1e-14);
  EXPECT_NEAR(w[2], 0.0, 1e-14);
  EXPECT_NEAR(w[3], 1.0, 1e-14);
  ComplexMatrix non_herm(2, 2, {1.0, 1.0, 0.0, 1.0});
  EXPECT_THROW(hermitian_eig(non_herm), PreconditionError);
}

TEST(Linops, HermitianEigReconstructsAndMatchesEigen) {
  std::mt19937_64 rng(2024);
  for (std::size_t n = 1; n <= 25; ++n) {
    const auto m = random_hermitian(n, rng);
    const auto eig = hermitian_eig(m);
    EXPECT_LE(frobenius_norm(eig.reconstruct() - m), 1e-10) << "n=" << n;
    const auto gram = eig.eigenvectors.adjoint() * eig.eigenvectors;
    EXPECT_LE(max_abs_diff(gram, ComplexMatrix::identity(n)), 1e-10);

    Eigen::MatrixXcd em(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) em(r, c) = m(r, c);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(em);
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_NEAR(eig.eigenvalues[j], ref.eigenvalues()(j), 1e-10);
    }
  }
}

TEST(Linops, HermitianEigHandlesDegenerateSpectra) {
  ComplexMatrix m = ComplexMatrix::identity(6) * 2.0;
  m(0, 5) = Complex(0.0, 1e-13);
  m(5, 0) = Complex(0.0, -1e-13);
  const auto eig = hermitian_eig(m);
  EXPECT_LE(frobenius_norm(eig.reconstruct() - m), 1e-12);
}

TEST(Linops, TraceDistanceExamples) {
  std::mt19937_64 rng(5);
  const auto rho = random_state(3, rng);
  EXPECT_NEAR(trace_distance(rho, rho), 0.0, 1e-15);
  const auto p0 = ComplexMatrix::projector(computational_ket(2, 0));
  const auto p1 = ComplexMatrix::projector(computational_ket(2, 1));
  EXPECT_NEAR(trace_distance(p0, p1), 1.0, 1e-15);
  EXPECT_NEAR(trace_distance(ComplexMatrix::identity(2) * 0.5, p0), 0.5, 1e-15);
  EXPECT_THROW(trace_distance(p0, ComplexMatrix::identity(3)), StructuralError);
}

TEST(Linops, OperatorNormExamples) {
  EXPECT_NEAR(operator_norm(ComplexMatrix::identity(4)), 1.0, 1e-15);
  EXPECT_NEAR(operator_norm(ComplexMatrix::zero(3)), 0.0, 1e-15);
  EXPECT_NEAR(operator_norm(partial_transpose(phi_plus(), {2, 2}, 0)), 0.5, 1e-14);
  EXPECT_THROW(operator_norm(ComplexMatrix(2, 2, {0.0, 1.0, 0.0, 0.0})), PreconditionError);
}

TEST(Linops, PsdProjectExamples) {
  std::mt19937_64 rng(9);
  const auto rho = random_state(4, rng);
  EXPECT_LE(max_abs_diff(psd_project(rho), rho), 1e-10);
  EXPECT_LE(max_abs_diff(psd_project(ComplexMatrix::identity(2) * -1.0), ComplexMatrix::zero(2)), 1e-15);
  EXPECT_LE(max_abs_diff(psd_project(ComplexMatrix::diagonal(std::vector<double>{1.0, -2.0})),
                         ComplexMatrix::diagonal(std::vector<double>{1.0, 0.0})),
            1e-15);
}

TEST(Linops, NormInequalitiesOnRandomHermitian) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> dim(2, 8);
  for (int sample = 0; sample < 100; ++sample) {
    const std::size_t n = dim(rng);
    const auto a = random_hermitian(n, rng);
    const auto b = random_hermitian(n, rng);
    const auto c = random_hermitian(n, rng);
    EXPECT_GE(trace_norm(a), operator_norm(a) - 1e-12);
    EXPECT_LE(trace_distance(a, c), trace_distance(a, b) + trace_distance(b, c) + 1e-12);
    EXPECT_NEAR(trace_distance(a, b), trace_distance(b, a), 1e-12);
  }
}

TEST(Linops, PartialTraceOfProductScalesByTrace) {
  std::mt19937_64 rng(123);
  for (int sample = 0; sample < 20; ++sample) {
    const auto a = random_hermitian(3, rng);
    const auto b = random_hermitian(2, rng);
    const std::size_t keep[] = {0};
    const auto lhs = partial_trace(tensor_product(a, b), {3, 2}, keep);
    EXPECT_LE(max_abs_diff(lhs, a * b.trace()), 1e-12);
  }
}

TEST(Linops, PsdProjectOutputIsPsdAndIdempotent) {
  std::mt19937_64 rng(31);
  for (int sample = 0; sample < 50; ++sample) {
    const auto m = random_hermitian(1 + sample % 7, rng);
    const auto p = psd_project(m);
    EXPECT_GE(min_eigenvalue(p), -1e-12);
    EXPECT_LE(max_abs_diff(psd_project(p), p), 1e-10);
  }
}
