#ifndef NETSTEER_SDP_PROBLEM_HPP
#define NETSTEER_SDP_PROBLEM_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "netsteer/linops.hpp"

namespace netsteer {

// Orthonormal real coordinates of an m x m Hermitian matrix: the m diagonal
// entries, then sqrt2 Re and sqrt2 Im of each upper off-diagonal entry, row by row.
std::size_t hermitian_coordinate_count(std::size_t m);
std::vector<double> hermitian_to_coordinates(const ComplexMatrix& h);
ComplexMatrix coordinates_to_hermitian(std::span<const double> v, std::size_t m);

enum class ConeKind { psd, nonnegative, free };

struct ConeBlock {
  ConeKind kind;
  std::size_t dim = 0;  // matrix size for psd, scalar count otherwise
  std::size_t offset = 0;
  std::size_t size = 0;
  std::string name;
};

struct LinearTerm {
  std::size_t variable;
  double coefficient;
};

struct LinearConstraint {
  std::vector<LinearTerm> terms;
  double rhs = 0.0;
};

/// min c^T x  subject to  A x = b,  x in a product of PSD, nonnegative and free cones.
class SdpProblem {
 public:
  std::size_t add_psd(std::size_t dim, std::string name = {});
  std::size_t add_nonnegative(std::size_t count, std::string name = {});
  std::size_t add_free(std::size_t count, std::string name = {});

  const std::vector<ConeBlock>& blocks() const { return blocks_; }
  const ConeBlock& block(std::size_t b) const { return blocks_.at(b); }
  std::size_t variable_count() const { return variables_; }
  std::size_t constraint_count() const { return constraints_.size(); }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  const std::vector<double>& objective() const { return objective_; }

  void add_constraint(LinearConstraint c);
  void set_objective(std::size_t variable, double coefficient);
  // scalar variable index inside a scalar block
  std::size_t scalar(std::size_t block, std::size_t k = 0) const;

  // Sum_t coeff_t * X_{block_t} + Sum_s coeff_s * y_s * E_s = rhs, one row per coordinate.
  struct MatrixTerm {
    std::size_t block;
    double coefficient;
  };
  struct ScaledMatrixTerm {
    std::size_t variable;
    ComplexMatrix matrix;
  };
  void add_matrix_equality(const std::vector<MatrixTerm>& blocks,
                           const std::vector<ScaledMatrixTerm>& scalars, const ComplexMatrix& rhs);
  // X_out = map(X_in) for a linear map on Hermitian matrices.
  void add_linear_map_equality(std::size_t out_block, std::size_t in_block,
                               const std::function<ComplexMatrix(const ComplexMatrix&)>& map);

  void validate() const;

 private:
  std::size_t add_block(ConeKind kind, std::size_t dim, std::size_t size, std::string name);

  std::vector<ConeBlock> blocks_;
  std::size_t variables_ = 0;
  std::vector<LinearConstraint> constraints_;
  std::vector<double> objective_;
};

}  // namespace netsteer

#endif  // NETSTEER_SDP_PROBLEM_HPP
