#include "netsteer/quantum.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "netsteer/errors.hpp"

namespace netsteer {

void DensityOperator::validate(double tol) const {
  if (!matrix.is_square()) throw PreconditionError("density operator is not square");
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  if (total != matrix.rows()) throw StructuralError("density operator dims do not match size");
  if (!is_hermitian(matrix, tol)) throw PreconditionError("density operator is not Hermitian");
  if (std::abs(matrix.trace() - Complex(1.0)) > tol) {
    throw PreconditionError("density operator does not have unit trace");
  }
  if (min_eigenvalue(matrix) < -tol) throw PreconditionError("density operator is not PSD");
}

void Povm::validate(double tol) const {
  if (elements.empty()) throw PreconditionError("POVM has no elements");
  const std::size_t d = dimension();
  ComplexMatrix sum(d, d);
  for (const auto& e : elements) {
    if (e.rows() != d || !e.is_square()) throw StructuralError("POVM elements differ in size");
    if (!is_hermitian(e, tol) || min_eigenvalue(e) < -tol) {
      throw PreconditionError("POVM element is not PSD");
    }
    sum += e;
  }
  if (max_abs_diff(sum, ComplexMatrix::identity(d)) > tol) {
    throw PreconditionError("POVM elements do not sum to identity");
  }
}

double MubFamily::max_overlap_error() const {
  double worst = 0.0;
  const double unbiased = 1.0 / static_cast<double>(dimension);
  for (std::size_t b1 = 0; b1 < bases.size(); ++b1) {
    for (std::size_t b2 = b1; b2 < bases.size(); ++b2) {
      for (std::size_t s = 0; s < dimension; ++s) {
        for (std::size_t t = 0; t < dimension; ++t) {
          const double overlap = std::norm(inner(bases[b1][s], bases[b2][t]));
          const double expected = b1 == b2 ? (s == t ? 1.0 : 0.0) : unbiased;
          worst = std::max(worst, std::abs(overlap - expected));
        }
      }
    }
  }
  return worst;
}

namespace pauli {
ComplexMatrix x() { return ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0}); }
ComplexMatrix y() { return ComplexMatrix(2, 2, {0.0, Complex(0, -1), Complex(0, 1), 0.0}); }
ComplexMatrix z() { return ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0}); }
}  // namespace pauli

Ket computational_ket(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DomainError("computational_ket: index out of range");
  Ket k(dim);
  k[index] = 1.0;
  return k;
}

Ket maximally_entangled(std::size_t d) {
  Ket k(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t t = 0; t < d; ++t) k[t * d + t] = amp;
  return k;
}

std::vector<Ket> bell_states() {
  const double h = 1.0 / std::numbers::sqrt2;
  return {Ket{h, 0.0, 0.0, h}, Ket{h, 0.0, 0.0, -h}, Ket{0.0, h, h, 0.0}, Ket{0.0, h, -h, 0.0}};
}

namespace {

void require_visibility(double v, const char* op) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(op) + ": visibility must lie in [0, 1]");
  }
}

DensityOperator mix_with_white_noise(const Ket& pure, double v, Dims dims) {
  const std::size_t n = pure.size();
  ComplexMatrix m = ComplexMatrix::projector(pure) * v;
  m.add_scaled(ComplexMatrix::identity(n), (1.0 - v) / static_cast<double>(n));
  return DensityOperator{std::move(m), std::move(dims)};
}

// Galois ring GR(4, m) for m = 1, 2, used for the dimension 2 and 4 bases.
// Elements are a0 + a1*xi with coefficients in Z4 and xi^2 = -xi - 1.
struct GaloisRing4 {
  std::size_t degree;

  struct Element {
    int c0 = 0;
    int c1 = 0;
  };

  Element mul(Element a, Element b) const {
    if (degree == 1) return {(a.c0 * b.c0) % 4, 0};
    // xi^2 = 3 + 3 xi (mod 4)
    const int c0 = a.c0 * b.c0 + 3 * a.c1 * b.c1;
    const int c1 = a.c0 * b.c1 + a.c1 * b.c0 + 3 * a.c1 * b.c1;
    return {c0 % 4, c1 % 4};
  }
  Element add(Element a, Element b) const { return {(a.c0 + b.c0) % 4, (a.c1 + b.c1) % 4}; }
  Element twice(Element a) const { return add(a, a); }
  // Trace to Z4: tr(1) = m, tr(xi) = -1 for m = 2.
  int trace(Element a) const {
    if (degree == 1) return a.c0 % 4;
    return (2 * a.c0 + 3 * a.c1) % 4;
  }
  std::vector<Element> teichmuller() const {
    if (degree == 1) return {{0, 0}, {1, 0}};
    return {{0, 0}, {1, 0}, {0, 1}, {3, 3}};
  }
};

std::vector<Basis> galois_ring_bases(std::size_t degree) {
  const GaloisRing4 ring{degree};
  const auto teich = ring.teichmuller();
  const std::size_t q = teich.size();
  const double amp = 1.0 / std::sqrt(static_cast<double>(q));
  const std::array<Complex, 4> i_pow{Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)};
  std::vector<Basis> bases;
  for (const auto& a : teich) {
    Basis basis;
    for (const auto& b : teich) {
      Ket v(q);
      const auto coeff = ring.add(a, ring.twice(b));
      for (std::size_t xi = 0; xi < q; ++xi) {
        v[xi] = amp * i_pow[static_cast<std::size_t>(ring.trace(ring.mul(coeff, teich[xi])))];
      }
      basis.push_back(std::move(v));
    }
    bases.push_back(std::move(basis));
  }
  return bases;
}

std::vector<Basis> odd_prime_bases(std::size_t p) {
  const double amp = 1.0 / std::sqrt(static_cast<double>(p));
  std::vector<Basis> bases;
  for (std::size_t a = 0; a < p; ++a) {
    Basis basis;
    for (std::size_t b = 0; b < p; ++b) {
      Ket v(p);
      for (std::size_t k = 0; k < p; ++k) {
        const std::size_t exponent = (a * k * k + b * k) % p;
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(exponent) / static_cast<double>(p);
        v[k] = amp * Complex(std::cos(phase), std::sin(phase));
      }
      basis.push_back(std::move(v));
    }
    bases.push_back(std::move(basis));
  }
  return bases;
}

}  // namespace

DensityOperator isotropic_state(std::size_t d, double visibility) {
  if (d < 2) throw DomainError("isotropic_state: dimension must be at least 2");
  require_visibility(visibility, "isotropic_state");
  return mix_with_white_noise(maximally_entangled(d), visibility, {d, d});
}

DensityOperator noisy_ghz(double visibility) {
  require_visibility(visibility, "noisy_ghz");
  const double h = 1.0 / std::numbers::sqrt2;
  Ket ghz(8);
  ghz[0] = h;
  ghz[7] = h;
  return mix_with_white_noise(ghz, visibility, {2, 2, 2});
}

MubFamily mub_family(std::size_t d, std::size_t count) {
  if (d < 2 || d > 5) throw DomainError("mub_family: supported dimensions are 2..5");
  if (count == 0 || count > d + 1) throw DomainError("mub_family: count must lie in 1..d+1");
  MubFamily family;
  family.dimension = d;
  Basis computational;
  for (std::size_t t = 0; t < d; ++t) computational.push_back(computational_ket(d, t));
  family.bases.push_back(std::move(computational));
  std::vector<Basis> rest;
  if (d == 2) {
    rest = galois_ring_bases(1);
  } else if (d == 4) {
    rest = galois_ring_bases(2);
  } else {
    rest = odd_prime_bases(d);
  }
  for (std::size_t b = 0; b + 1 < count; ++b) family.bases.push_back(std::move(rest[b]));
  return family;
}

Povm projective_povm(const Basis& basis) {
  if (basis.empty()) throw PreconditionError("projective_povm: empty basis");
  const std::size_t d = basis.front().size();
  if (basis.size() != d) throw PreconditionError("projective_povm: basis is not complete");
  for (std::size_t s = 0; s < d; ++s) {
    if (basis[s].size() != d) throw PreconditionError("projective_povm: ragged basis");
    for (std::size_t t = 0; t < d; ++t) {
      const double expected = s == t ? 1.0 : 0.0;
      if (std::abs(inner(basis[s], basis[t]) - Complex(expected)) > 1e-9) {
        throw PreconditionError("projective_povm: basis is not orthonormal");
      }
    }
  }
  Povm povm;
  for (const auto& v : basis) povm.elements.push_back(ComplexMatrix::projector(v));
  return povm;
}

Povm bell_state_measurement() {
  Povm povm;
  for (const auto& b : bell_states()) povm.elements.push_back(ComplexMatrix::projector(b));
  return povm;
}

}  // namespace netsteer
