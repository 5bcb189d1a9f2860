#include "netsteer/linops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "netsteer/errors.hpp"

namespace netsteer {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw StructuralError(std::string(op) + ": shape mismatch (" + std::to_string(a.rows()) +
                          "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                          "x" + std::to_string(b.cols()) + ")");
  }
}

std::size_t product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void require_square_with_dims(const ComplexMatrix& m, const Dims& dims, const char* op) {
  if (!m.is_square()) throw StructuralError(std::string(op) + ": matrix is not square");
  if (dims.empty() || product(dims) != m.rows()) {
    throw StructuralError(std::string(op) + ": subsystem dimensions do not match matrix size " +
                          std::to_string(m.rows()));
  }
}

std::vector<std::size_t> strides_of(const Dims& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  return strides;
}

// Offsets of all multi-indices over the chosen subsystems, enumerated with the
// first chosen subsystem most significant.
std::vector<std::size_t> offsets_over(const Dims& dims, const std::vector<std::size_t>& strides,
                                      const std::vector<std::size_t>& chosen) {
  std::vector<std::size_t> offsets{0};
  for (std::size_t k : chosen) {
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * dims[k]);
    for (std::size_t base : offsets) {
      for (std::size_t i = 0; i < dims[k]; ++i) next.push_back(base + i * strides[k]);
    }
    offsets = std::move(next);
  }
  return offsets;
}

void require_hermitian(const ComplexMatrix& m, const char* op) {
  if (!m.is_square()) throw StructuralError(std::string(op) + ": matrix is not square");
  if (!is_hermitian(m)) throw PreconditionError(std::string(op) + ": matrix is not Hermitian");
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) {
    throw StructuralError("ComplexMatrix: entry count " + std::to_string(entries_.size()) +
                          " does not equal " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_real_imag(std::size_t rows, std::size_t cols,
                                            std::span<const double> re,
                                            std::span<const double> im) {
  if (re.size() != rows * cols || im.size() != rows * cols) {
    throw StructuralError("from_real_imag: array length does not match shape");
  }
  std::vector<Complex> entries(rows * cols);
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i] = Complex(re[i], im[i]);
  return ComplexMatrix(rows, cols, std::move(entries));
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> u, std::span<const Complex> v) {
  ComplexMatrix m(u.size(), v.size());
  for (std::size_t r = 0; r < u.size(); ++r) {
    for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = u[r] * std::conj(v[c]);
  }
  return m;
}

std::vector<double> ComplexMatrix::real_parts() const {
  std::vector<double> out(entries_.size());
  std::transform(entries_.begin(), entries_.end(), out.begin(),
                 [](const Complex& z) { return z.real(); });
  return out;
}

std::vector<double> ComplexMatrix::imag_parts() const {
  std::vector<double> out(entries_.size());
  std::transform(entries_.begin(), entries_.end(), out.begin(),
                 [](const Complex& z) { return z.imag(); });
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  }
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
  }
  return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix m(*this);
  for (auto& z : m.entries_) z = std::conj(z);
  return m;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw StructuralError("trace: matrix is not square");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (auto& z : entries_) z *= scalar;
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(double scalar) {
  for (auto& z : entries_) z *= scalar;
  return *this;
}

ComplexMatrix& ComplexMatrix::add_scaled(const ComplexMatrix& other, double scalar) {
  require_same_shape(*this, other, "add_scaled");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += scalar * other.entries_[i];
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= s; }
ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw StructuralError("operator*: inner dimensions differ");
  ComplexMatrix m(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex(0.0)) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) m(r, c) += ark * b(k, c);
    }
  }
  return m;
}

Ket operator*(const ComplexMatrix& a, std::span<const Complex> v) {
  if (a.cols() != v.size()) throw StructuralError("operator*: vector length differs");
  Ket out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) acc += a(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

Ket HermitianEigen::eigenvector(std::size_t j) const {
  Ket v(eigenvectors.rows());
  for (std::size_t r = 0; r < v.size(); ++r) v[r] = eigenvectors(r, j);
  return v;
}

ComplexMatrix HermitianEigen::reconstruct() const {
  const std::size_t n = eigenvalues.size();
  ComplexMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 0; r < n; ++r) {
      const Complex vr = eigenvectors(r, j) * eigenvalues[j];
      for (std::size_t c = 0; c < n; ++c) m(r, c) += vr * std::conj(eigenvectors(c, j));
    }
  }
  return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
  }
  return worst;
}

double frobenius_norm(const ComplexMatrix& m) {
  double acc = 0.0;
  for (const auto& z : m.entries()) acc += std::norm(z);
  return std::sqrt(acc);
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) return false;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = r; c < m.cols(); ++c) {
      if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) return false;
    }
  }
  return true;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  ComplexMatrix h(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) h(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
  }
  return h;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ra = 0; ra < a.rows(); ++ra) {
    for (std::size_t ca = 0; ca < a.cols(); ++ca) {
      const Complex s = a(ra, ca);
      if (s == Complex(0.0)) continue;
      for (std::size_t rb = 0; rb < b.rows(); ++rb) {
        for (std::size_t cb = 0; cb < b.cols(); ++cb) {
          m(ra * b.rows() + rb, ca * b.cols() + cb) = s * b(rb, cb);
        }
      }
    }
  }
  return m;
}

ComplexMatrix tensor_product(std::span<const ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::identity(1);
  for (const auto& f : factors) out = tensor_product(out, f);
  return out;
}

Ket tensor_product(std::span<const Complex> a, std::span<const Complex> b) {
  Ket out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims,
                            std::span<const std::size_t> keep) {
  require_square_with_dims(m, dims, "partial_trace");
  std::vector<bool> kept(dims.size(), false);
  std::vector<std::size_t> keep_sorted(keep.begin(), keep.end());
  std::sort(keep_sorted.begin(), keep_sorted.end());
  for (std::size_t k : keep_sorted) {
    if (k >= dims.size() || kept[k]) {
      throw StructuralError("partial_trace: invalid or repeated subsystem index");
    }
    kept[k] = true;
  }
  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (!kept[k]) traced.push_back(k);
  }
  const auto strides = strides_of(dims);
  const auto keep_off = offsets_over(dims, strides, keep_sorted);
  const auto trace_off = offsets_over(dims, strides, traced);
  ComplexMatrix out(keep_off.size(), keep_off.size());
  for (std::size_t r = 0; r < keep_off.size(); ++r) {
    for (std::size_t c = 0; c < keep_off.size(); ++c) {
      Complex acc = 0.0;
      for (std::size_t t : trace_off) acc += m(keep_off[r] + t, keep_off[c] + t);
      out(r, c) = acc;
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const Dims& dims,
                                std::size_t subsystem) {
  require_square_with_dims(m, dims, "partial_transpose");
  if (subsystem >= dims.size()) throw StructuralError("partial_transpose: bad subsystem");
  const std::size_t stride = strides_of(dims)[subsystem];
  const std::size_t d = dims[subsystem];
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const std::size_t rs = (r / stride) % d;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const std::size_t cs = (c / stride) % d;
      out(r - rs * stride + cs * stride, c - cs * stride + rs * stride) = m(r, c);
    }
  }
  return out;
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m, const Dims& dims,
                                 std::span<const std::size_t> perm) {
  require_square_with_dims(m, dims, "permute_subsystems");
  if (perm.size() != dims.size()) throw StructuralError("permute_subsystems: bad permutation");
  std::vector<bool> seen(dims.size(), false);
  Dims out_dims(dims.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (perm[k] >= dims.size() || seen[perm[k]]) {
      throw StructuralError("permute_subsystems: bad permutation");
    }
    seen[perm[k]] = true;
    out_dims[k] = dims[perm[k]];
  }
  const auto in_strides = strides_of(dims);
  const auto out_strides = strides_of(out_dims);
  // Input index -> output index.
  std::vector<std::size_t> map(m.rows());
  for (std::size_t in = 0; in < m.rows(); ++in) {
    std::size_t out = 0;
    for (std::size_t k = 0; k < perm.size(); ++k) {
      const std::size_t digit = (in / in_strides[perm[k]]) % dims[perm[k]];
      out += digit * out_strides[k];
    }
    map[in] = out;
  }
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(map[r], map[c]) = m(r, c);
  }
  return out;
}

HermitianEigen hermitian_eig(const ComplexMatrix& m) {
  require_hermitian(m, "hermitian_eig");
  const std::size_t n = m.rows();
  ComplexMatrix a = hermitian_part(m);
  ComplexMatrix v = ComplexMatrix::identity(n);

  double scale = 0.0;
  for (const auto& z : a.entries()) scale += std::norm(z);
  const double threshold = 1e-32 * std::max(scale, 1e-300);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    }
    if (off <= threshold) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag * mag <= 1e-40 * scale || mag == 0.0) continue;
        // Phase-rotate so the (p,q) element is real, then apply a real rotation.
        const Complex phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J = diag(1, conj(phase)) * [[c, s], [-s, c]] acting on columns p, q.
        const Complex jpp = c;
        const Complex jpq = s;
        const Complex jqp = -s * std::conj(phase);
        const Complex jqq = c * std::conj(phase);
        // a <- a J
        for (std::size_t r = 0; r < n; ++r) {
          const Complex arp = a(r, p);
          const Complex arq = a(r, q);
          a(r, p) = arp * jpp + arq * jqp;
          a(r, q) = arp * jpq + arq * jqq;
        }
        // a <- J^dagger a
        for (std::size_t col = 0; col < n; ++col) {
          const Complex apc = a(p, col);
          const Complex aqc = a(q, col);
          a(p, col) = std::conj(jpp) * apc + std::conj(jqp) * aqc;
          a(q, col) = std::conj(jpq) * apc + std::conj(jqq) * aqc;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t r = 0; r < n; ++r) {
          const Complex vrp = v(r, p);
          const Complex vrq = v(r, q);
          v(r, p) = vrp * jpp + vrq * jqp;
          v(r, q) = vrp * jpq + vrq * jqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEigen result;
  result.eigenvalues.resize(n);
  result.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    result.eigenvalues[j] = a(order[j], order[j]).real();
    for (std::size_t r = 0; r < n; ++r) result.eigenvectors(r, j) = v(r, order[j]);
  }
  return result;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  return hermitian_eig(m).eigenvalues;
}

double min_eigenvalue(const ComplexMatrix& m) { return hermitian_eigenvalues(m).front(); }

double trace_norm(const ComplexMatrix& m) {
  double acc = 0.0;
  for (double w : hermitian_eigenvalues(m)) acc += std::abs(w);
  return acc;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "trace_distance");
  return 0.5 * trace_norm(a - b);
}

double operator_norm(const ComplexMatrix& m) {
  const auto w = hermitian_eigenvalues(m);
  return std::max(std::abs(w.front()), std::abs(w.back()));
}

ComplexMatrix psd_project(const ComplexMatrix& m) {
  auto eig = hermitian_eig(m);
  for (double& w : eig.eigenvalues) w = std::max(w, 0.0);
  return eig.reconstruct();
}

double norm(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) throw StructuralError("inner: length mismatch");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += std::conj(u[i]) * v[i];
  return acc;
}

}  // namespace netsteer
