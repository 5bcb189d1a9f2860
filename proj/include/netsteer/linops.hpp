#ifndef NETSTEER_LINOPS_HPP
#define NETSTEER_LINOPS_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace netsteer {

using Complex = std::complex<double>;
using Ket = std::vector<Complex>;
using Dims = std::vector<std::size_t>;

inline constexpr double kHermitianTolerance = 1e-9;

/// Dense complex matrix in row-major order.
///
/// All operators in this library (states, POVM elements, assemblage members)
/// are small and dense, so no sparse or expression-template machinery is used.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zero(std::size_t n) { return ComplexMatrix(n, n); }
  static ComplexMatrix diagonal(std::span<const double> values);
  // Lossless construction from separate real and imaginary row-major arrays.
  static ComplexMatrix from_real_imag(std::size_t rows, std::size_t cols,
                                      std::span<const double> re,
                                      std::span<const double> im);
  // |u><v|
  static ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> v);
  // |v><v|
  static ComplexMatrix projector(std::span<const Complex> v) { return outer(v, v); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return entries_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<Complex> entries() { return entries_; }
  std::span<const Complex> entries() const { return entries_; }
  std::vector<double> real_parts() const;
  std::vector<double> imag_parts() const;

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  Complex trace() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);
  ComplexMatrix& operator*=(double scalar);
  // this += scalar * other
  ComplexMatrix& add_scaled(const ComplexMatrix& other, double scalar);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, Complex s);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, double s);
ComplexMatrix operator*(double s, ComplexMatrix a);
Ket operator*(const ComplexMatrix& a, std::span<const Complex> v);

struct HermitianEigen {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column j pairs with eigenvalues[j]

  Ket eigenvector(std::size_t j) const;
  ComplexMatrix reconstruct() const;
};

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_norm(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTolerance);
ComplexMatrix hermitian_part(const ComplexMatrix& m);

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor_product(std::span<const ComplexMatrix> factors);
Ket tensor_product(std::span<const Complex> a, std::span<const Complex> b);

// Keeps the subsystems listed in `keep` (in ascending order) and traces out the rest.
ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims,
                            std::span<const std::size_t> keep);
ComplexMatrix partial_transpose(const ComplexMatrix& m, const Dims& dims,
                                std::size_t subsystem);
// Reorders tensor factors: factor k of the result is factor perm[k] of the input.
ComplexMatrix permute_subsystems(const ComplexMatrix& m, const Dims& dims,
                                 std::span<const std::size_t> perm);

// Cyclic Jacobi; the input is symmetrized as (m + m^dagger)/2 first.
HermitianEigen hermitian_eig(const ComplexMatrix& m);
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);
double min_eigenvalue(const ComplexMatrix& m);

double trace_norm(const ComplexMatrix& m);
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double operator_norm(const ComplexMatrix& m);
ComplexMatrix psd_project(const ComplexMatrix& m);

double norm(std::span<const Complex> v);
Complex inner(std::span<const Complex> u, std::span<const Complex> v);  // <u|v>

}  // namespace netsteer

#endif  // NETSTEER_LINOPS_HPP
