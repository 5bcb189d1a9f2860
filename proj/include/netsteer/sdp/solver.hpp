#ifndef NETSTEER_SDP_SOLVER_HPP
#define NETSTEER_SDP_SOLVER_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "netsteer/sdp/problem.hpp"

namespace netsteer {

struct SolverSettings {
  double tolerance = 1e-7;
  std::size_t max_iterations = 200000;
  double rho = 1.0;
  double relaxation = 1.6;
  std::size_t adapt_interval = 50;
  double adapt_threshold = 3.0;
  std::size_t anderson_memory = 10;  // 0 disables acceleration

  void validate() const;
};

enum class SolverStatus { converged, max_iterations };
std::string to_string(SolverStatus s);

// Iterates that can seed a later solve of a problem with the same layout.
struct SolverWarmStart {
  std::vector<double> z;
  std::vector<double> u;
  double rho = 0.0;
};

struct SdpSolution {
  SolverStatus status = SolverStatus::max_iterations;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  std::size_t iterations = 0;
  std::vector<double> x;  // cone-feasible iterate
  SolverWarmStart warm;

  bool converged() const { return status == SolverStatus::converged; }
  ComplexMatrix matrix(const SdpProblem& p, std::size_t block) const;
  double scalar(const SdpProblem& p, std::size_t block, std::size_t k = 0) const;
};

// ADMM splitting between the affine set {Ax = b} and the cone product.
SdpSolution solve_sdp(const SdpProblem& problem, const SolverSettings& settings = {},
                      const SolverWarmStart* warm = nullptr);

}  // namespace netsteer

#endif  // NETSTEER_SDP_SOLVER_HPP
