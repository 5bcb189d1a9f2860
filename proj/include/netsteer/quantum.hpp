#ifndef NETSTEER_QUANTUM_HPP
#define NETSTEER_QUANTUM_HPP

#include <cstddef>
#include <vector>

#include "netsteer/linops.hpp"

namespace netsteer {

// Density operator on a tensor product of subsystems with the given dims.
struct DensityOperator {
  ComplexMatrix matrix;
  Dims dims;

  // Throws PreconditionError unless Hermitian, unit trace and PSD within tol.
  void validate(double tol = 1e-9) const;
};

struct Povm {
  std::vector<ComplexMatrix> elements;

  std::size_t outcome_count() const { return elements.size(); }
  std::size_t dimension() const { return elements.empty() ? 0 : elements.front().rows(); }
  void validate(double tol = 1e-9) const;
};

using Basis = std::vector<Ket>;

struct MubFamily {
  std::size_t dimension = 0;
  std::vector<Basis> bases;

  // Max deviation from |<b_s|g_t>|^2 = delta (same basis) or 1/d (different bases).
  double max_overlap_error() const;
};

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

Ket computational_ket(std::size_t dim, std::size_t index);
// (1/sqrt(d)) sum_t |t,t>
Ket maximally_entangled(std::size_t d);

// Phi+, Phi-, Psi+, Psi- with (|00> +- |11>)/sqrt2 and (|01> +- |10>)/sqrt2.
std::vector<Ket> bell_states();

DensityOperator isotropic_state(std::size_t d, double visibility);
DensityOperator noisy_ghz(double visibility);

// Supported dimensions 2..5. The first basis is always the computational one;
// for d = 2 the first three are the Z, X and Y eigenbases.
MubFamily mub_family(std::size_t d, std::size_t count);

Povm projective_povm(const Basis& basis);
Povm bell_state_measurement();

}  // namespace netsteer

#endif  // NETSTEER_QUANTUM_HPP
