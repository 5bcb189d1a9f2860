#include "netsteer/sdp/problem.hpp"

#include <cmath>
#include <numbers>

#include "netsteer/errors.hpp"

namespace netsteer {

std::size_t hermitian_coordinate_count(std::size_t m) { return m * m; }

std::vector<double> hermitian_to_coordinates(const ComplexMatrix& h) {
  const std::size_t m = h.rows();
  std::vector<double> v;
  v.reserve(m * m);
  for (std::size_t r = 0; r < m; ++r) v.push_back(h(r, r).real());
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = r + 1; c < m; ++c) {
      const Complex z = 0.5 * (h(r, c) + std::conj(h(c, r)));
      v.push_back(std::numbers::sqrt2 * z.real());
      v.push_back(std::numbers::sqrt2 * z.imag());
    }
  }
  return v;
}

ComplexMatrix coordinates_to_hermitian(std::span<const double> v, std::size_t m) {
  if (v.size() != m * m) throw StructuralError("coordinates_to_hermitian: wrong coordinate count");
  ComplexMatrix h(m, m);
  for (std::size_t r = 0; r < m; ++r) h(r, r) = v[r];
  std::size_t k = m;
  const double s = 1.0 / std::numbers::sqrt2;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = r + 1; c < m; ++c) {
      h(r, c) = Complex(v[k] * s, v[k + 1] * s);
      h(c, r) = std::conj(h(r, c));
      k += 2;
    }
  }
  return h;
}

std::size_t SdpProblem::add_block(ConeKind kind, std::size_t dim, std::size_t size,
                                  std::string name) {
  if (size == 0) throw StructuralError("SdpProblem: empty variable block");
  blocks_.push_back({kind, dim, variables_, size, std::move(name)});
  variables_ += size;
  objective_.resize(variables_, 0.0);
  return blocks_.size() - 1;
}

std::size_t SdpProblem::add_psd(std::size_t dim, std::string name) {
  return add_block(ConeKind::psd, dim, hermitian_coordinate_count(dim), std::move(name));
}

std::size_t SdpProblem::add_nonnegative(std::size_t count, std::string name) {
  return add_block(ConeKind::nonnegative, count, count, std::move(name));
}

std::size_t SdpProblem::add_free(std::size_t count, std::string name) {
  return add_block(ConeKind::free, count, count, std::move(name));
}

std::size_t SdpProblem::scalar(std::size_t block, std::size_t k) const {
  const auto& b = blocks_.at(block);
  if (b.kind == ConeKind::psd || k >= b.size) throw StructuralError("SdpProblem: not a scalar entry");
  return b.offset + k;
}

void SdpProblem::add_constraint(LinearConstraint c) {
  for (const auto& t : c.terms) {
    if (t.variable >= variables_) throw StructuralError("SdpProblem: constraint references unknown variable");
  }
  constraints_.push_back(std::move(c));
}

void SdpProblem::set_objective(std::size_t variable, double coefficient) {
  if (variable >= variables_) throw StructuralError("SdpProblem: objective references unknown variable");
  objective_[variable] = coefficient;
}

void SdpProblem::add_matrix_equality(const std::vector<MatrixTerm>& blocks,
                                     const std::vector<ScaledMatrixTerm>& scalars,
                                     const ComplexMatrix& rhs) {
  const std::size_t m = rhs.rows();
  for (const auto& t : blocks) {
    const auto& b = blocks_.at(t.block);
    if (b.kind != ConeKind::psd || b.dim != m) throw StructuralError("matrix equality: block size mismatch");
  }
  std::vector<std::vector<double>> scalar_coords;
  for (const auto& s : scalars) {
    if (s.matrix.rows() != m) throw StructuralError("matrix equality: scalar term size mismatch");
    scalar_coords.push_back(hermitian_to_coordinates(s.matrix));
  }
  const auto b = hermitian_to_coordinates(rhs);
  for (std::size_t k = 0; k < m * m; ++k) {
    LinearConstraint c;
    c.rhs = b[k];
    for (const auto& t : blocks) c.terms.push_back({blocks_[t.block].offset + k, t.coefficient});
    for (std::size_t s = 0; s < scalars.size(); ++s) {
      if (scalar_coords[s][k] != 0.0) c.terms.push_back({scalars[s].variable, scalar_coords[s][k]});
    }
    add_constraint(std::move(c));
  }
}

void SdpProblem::add_linear_map_equality(
    std::size_t out_block, std::size_t in_block,
    const std::function<ComplexMatrix(const ComplexMatrix&)>& map) {
  const auto& out = blocks_.at(out_block);
  const auto& in = blocks_.at(in_block);
  if (out.kind != ConeKind::psd || in.kind != ConeKind::psd) {
    throw StructuralError("linear map equality: blocks must be matrix blocks");
  }
  // column k of the map in coordinates
  std::vector<std::vector<double>> columns;
  std::vector<double> unit(in.size, 0.0);
  for (std::size_t k = 0; k < in.size; ++k) {
    unit[k] = 1.0;
    const auto image = map(coordinates_to_hermitian(unit, in.dim));
    if (image.rows() != out.dim) throw StructuralError("linear map equality: image size mismatch");
    columns.push_back(hermitian_to_coordinates(image));
    unit[k] = 0.0;
  }
  for (std::size_t r = 0; r < out.size; ++r) {
    LinearConstraint c;
    c.terms.push_back({out.offset + r, 1.0});
    for (std::size_t k = 0; k < in.size; ++k) {
      if (std::abs(columns[k][r]) > 1e-15) c.terms.push_back({in.offset + k, -columns[k][r]});
    }
    add_constraint(std::move(c));
  }
}

void SdpProblem::validate() const {
  if (variables_ == 0) throw StructuralError("SdpProblem: no variables");
  if (constraints_.size() > variables_) {
    throw StructuralError("SdpProblem: more equality constraints than variables");
  }
}

}  // namespace netsteer
