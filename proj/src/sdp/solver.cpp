#include "netsteer/sdp/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "netsteer/errors.hpp"

namespace netsteer {

namespace {

using Vector = Eigen::VectorXd;
using Sparse = Eigen::SparseMatrix<double>;

// Per-size eigensolver workspaces for the PSD blocks.
class ConeProjector {
 public:
  explicit ConeProjector(const SdpProblem& p) : problem_(p) {
    for (const auto& b : p.blocks()) {
      if (b.kind == ConeKind::psd && b.dim > max_dim_) max_dim_ = b.dim;
    }
    solvers_.resize(max_dim_ + 1);
    for (const auto& b : p.blocks()) {
      if (b.kind == ConeKind::psd && !solvers_[b.dim]) {
        solvers_[b.dim] = std::make_unique<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>>(
            static_cast<Eigen::Index>(b.dim));
      }
    }
  }

  void operator()(double* v) {
    for (const auto& b : problem_.blocks()) {
      switch (b.kind) {
        case ConeKind::free:
          break;
        case ConeKind::nonnegative:
          for (std::size_t k = 0; k < b.size; ++k) v[b.offset + k] = std::max(v[b.offset + k], 0.0);
          break;
        case ConeKind::psd:
          project_block(b, v + b.offset);
          break;
      }
    }
  }

 private:
  void project_block(const ConeBlock& b, double* coords) {
    const auto m = static_cast<Eigen::Index>(b.dim);
    if (m == 1) {
      coords[0] = std::max(coords[0], 0.0);
      return;
    }
    const double s = 1.0 / std::numbers::sqrt2;
    h_.resize(m, m);
    for (Eigen::Index r = 0; r < m; ++r) h_(r, r) = coords[r];
    std::size_t k = b.dim;
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = r + 1; c < m; ++c, k += 2) {
        h_(r, c) = Complex(coords[k] * s, coords[k + 1] * s);
        h_(c, r) = std::conj(h_(r, c));
      }
    }
    auto& es = *solvers_[b.dim];
    es.compute(h_);
    const auto& w = es.eigenvalues();
    if (w[0] >= 0.0) return;
    Eigen::Index first = 0;
    while (first < m && w[first] < 0.0) ++first;
    const auto vecs = es.eigenvectors().rightCols(m - first);
    h_.noalias() = vecs * w.tail(m - first).asDiagonal() * vecs.adjoint();
    for (Eigen::Index r = 0; r < m; ++r) coords[r] = h_(r, r).real();
    k = b.dim;
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = r + 1; c < m; ++c, k += 2) {
        coords[k] = std::numbers::sqrt2 * h_(r, c).real();
        coords[k + 1] = std::numbers::sqrt2 * h_(r, c).imag();
      }
    }
  }

  const SdpProblem& problem_;
  std::size_t max_dim_ = 0;
  std::vector<std::unique_ptr<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>>> solvers_;
  Eigen::MatrixXcd h_;
};

}  // namespace

void SolverSettings::validate() const {
  if (!(tolerance > 0.0)) throw DomainError("solver tolerance must be positive");
  if (max_iterations == 0) throw DomainError("solver needs at least one iteration");
  if (!(rho > 0.0)) throw DomainError("solver rho must be positive");
  if (!(relaxation > 0.0 && relaxation < 2.0)) throw DomainError("relaxation must lie in (0, 2)");
  if (adapt_interval == 0) throw DomainError("solver adapt interval must be positive");
  if (!(adapt_threshold > 1.0)) throw DomainError("adapt threshold must exceed 1");
}

std::string to_string(SolverStatus s) {
  return s == SolverStatus::converged ? "converged" : "max_iterations";
}

ComplexMatrix SdpSolution::matrix(const SdpProblem& p, std::size_t block) const {
  const auto& b = p.block(block);
  if (b.kind != ConeKind::psd) throw StructuralError("SdpSolution: block is not a matrix block");
  return coordinates_to_hermitian(std::span<const double>(x.data() + b.offset, b.size), b.dim);
}

double SdpSolution::scalar(const SdpProblem& p, std::size_t block, std::size_t k) const {
  return x.at(p.scalar(block, k));
}

SdpSolution solve_sdp(const SdpProblem& problem, const SolverSettings& settings,
                      const SolverWarmStart* warm) {
  settings.validate();
  problem.validate();
  const std::size_t n = problem.variable_count();
  const std::size_t m = problem.constraint_count();

  std::vector<Eigen::Triplet<double>> triplets;
  Vector b(m);
  for (std::size_t r = 0; r < m; ++r) {
    const auto& c = problem.constraints()[r];
    for (const auto& t : c.terms) triplets.emplace_back(r, t.variable, t.coefficient);
    b[r] = c.rhs;
  }
  Sparse A(m, n);
  A.setFromTriplets(triplets.begin(), triplets.end());
  const Sparse At = A.transpose();
  Eigen::SimplicialLDLT<Sparse> gram;
  if (m > 0) {
    const Sparse aat = A * At;
    gram.compute(aat);
    if (gram.info() != Eigen::Success) throw StructuralError("solve_sdp: singular constraint system");
    const Vector d = gram.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    if (d.minCoeff() <= 1e-12 * std::max(dmax, 1.0)) {
      throw StructuralError("solve_sdp: linearly dependent equality constraints");
    }
  }
  const Vector c = Eigen::Map<const Vector>(problem.objective().data(), static_cast<Eigen::Index>(n));

  const auto project_affine = [&](Vector& v) {
    if (m == 0) return;
    const Vector r = A * v - b;
    v -= At * gram.solve(r);
  };

  const auto nn = static_cast<Eigen::Index>(n);
  // iterate w = (z, u); one ADMM pass maps w to g
  Vector w = Vector::Zero(2 * nn);
  double rho = settings.rho;
  if (warm != nullptr && warm->z.size() == n && warm->u.size() == n && warm->rho > 0.0) {
    w.head(nn) = Eigen::Map<const Vector>(warm->z.data(), nn);
    w.tail(nn) = Eigen::Map<const Vector>(warm->u.data(), nn);
    rho = warm->rho;
  }
  Vector x(n), xr(n);
  ConeProjector project_cones(problem);
  const double alpha = settings.relaxation;
  const auto admm_pass = [&](const Vector& in, Vector& out) {
    x = in.head(nn) - in.tail(nn) - c / rho;
    project_affine(x);
    xr = alpha * x + (1.0 - alpha) * in.head(nn);
    out.head(nn) = xr + in.tail(nn);
    project_cones(out.data());
    out.tail(nn) = in.tail(nn) + xr - out.head(nn);
  };

  const auto memory = static_cast<Eigen::Index>(settings.anderson_memory);
  Eigen::MatrixXd dF(2 * nn, std::max<Eigen::Index>(memory, 1));
  Eigen::MatrixXd dG(2 * nn, std::max<Eigen::Index>(memory, 1));
  Eigen::Index stored = 0, next_col = 0;
  bool have_previous = false, accelerated = false;
  Vector g(2 * nn), f(2 * nn), f_prev(2 * nn), g_prev(2 * nn), g_safe(2 * nn);
  double f_safe = 0.0;
  const auto reset_memory = [&] {
    stored = 0;
    next_col = 0;
    have_previous = false;
  };

  SdpSolution sol;
  double primal = 0.0, dual = 0.0;
  std::size_t it = 0;
  while (it < settings.max_iterations) {
    ++it;
    admm_pass(w, g);
    f = g - w;
    const double f_norm = f.norm();
    if (accelerated && f_norm > f_safe) {
      // the extrapolated point made things worse: fall back to the plain step
      w = g_safe;
      accelerated = false;
      reset_memory();
      continue;
    }
    accelerated = false;
    const auto z = g.head(nn);
    const auto u = g.tail(nn);
    const double scale_p = std::max({1.0, x.norm(), z.norm()});
    const double scale_d = std::max(1.0, rho * u.norm());
    primal = (x - z).norm() / scale_p;
    dual = rho * (z - w.head(nn)).norm() / scale_d;
    if (primal < settings.tolerance && dual < settings.tolerance) {
      w = g;
      sol.status = SolverStatus::converged;
      break;
    }
    if (it % settings.adapt_interval == 0 && primal > 0.0 && dual > 0.0) {
      const double ratio = std::clamp(std::sqrt(primal / dual), 0.1, 10.0);
      if (ratio > settings.adapt_threshold || ratio < 1.0 / settings.adapt_threshold) {
        rho *= ratio;
        g.tail(nn) /= ratio;
        w = g;
        reset_memory();
        continue;
      }
    }
    if (memory == 0) {
      w = g;
      continue;
    }
    if (have_previous) {
      dF.col(next_col) = f - f_prev;
      dG.col(next_col) = g - g_prev;
      next_col = (next_col + 1) % memory;
      stored = std::min(stored + 1, memory);
    }
    f_prev = f;
    g_prev = g;
    have_previous = true;
    g_safe = g;
    f_safe = f_norm;
    if (stored == 0) {
      w = g;
      continue;
    }
    const auto F = dF.leftCols(stored);
    Eigen::MatrixXd gram_f = F.transpose() * F;
    const double reg = 1e-10 * std::max(gram_f.trace(), 1e-300);
    gram_f.diagonal().array() += reg;
    const Vector gamma = gram_f.ldlt().solve(F.transpose() * f);
    if (!gamma.allFinite()) {
      w = g;
      reset_memory();
      continue;
    }
    w = g - dG.leftCols(stored) * gamma;
    accelerated = true;
  }
  const auto z = w.head(nn);
  const auto u = w.tail(nn);
  sol.iterations = it;
  sol.primal_residual = primal;
  sol.dual_residual = dual;
  sol.x.assign(z.data(), z.data() + n);
  sol.objective = c.dot(z);
  sol.warm.z = sol.x;
  sol.warm.u.assign(u.data(), u.data() + n);
  sol.warm.rho = rho;
  return sol;
}

}  // namespace netsteer
