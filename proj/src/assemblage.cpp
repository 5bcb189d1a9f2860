#include "netsteer/assemblage.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "netsteer/errors.hpp"

namespace netsteer {

namespace {

std::size_t product(const std::vector<std::size_t>& v) {
  return std::accumulate(v.begin(), v.end(), std::size_t{1}, std::multiplies<>());
}

std::vector<std::size_t> unflatten(std::size_t flat, const std::vector<std::size_t>& radices) {
  std::vector<std::size_t> digits(radices.size());
  for (std::size_t k = radices.size(); k-- > 0;) {
    digits[k] = flat % radices[k];
    flat /= radices[k];
  }
  return digits;
}

std::size_t flatten(std::span<const std::size_t> digits, const std::vector<std::size_t>& radices) {
  if (digits.size() != radices.size()) throw StructuralError("tuple length mismatch");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < radices.size(); ++k) {
    if (digits[k] >= radices[k]) throw StructuralError("tuple entry out of range");
    flat = flat * radices[k] + digits[k];
  }
  return flat;
}

}  // namespace

Assemblage::Assemblage(std::vector<std::size_t> settings, std::vector<std::size_t> outcomes,
                       Dims trusted_dims)
    : settings_(std::move(settings)),
      outcomes_(std::move(outcomes)),
      trusted_dims_(std::move(trusted_dims)) {
  if (settings_.size() != outcomes_.size()) {
    throw StructuralError("Assemblage: settings and outcomes lists differ in length");
  }
  if (trusted_dims_.empty()) throw StructuralError("Assemblage: no trusted subsystems");
  setting_tuples_ = product(settings_);
  outcome_tuples_ = product(outcomes_);
  trusted_dimension_ = product(trusted_dims_);
  if (setting_tuples_ == 0 || outcome_tuples_ == 0 || trusted_dimension_ == 0) {
    throw StructuralError("Assemblage: zero-sized index range");
  }
  members_.assign(setting_tuples_ * outcome_tuples_,
                  ComplexMatrix(trusted_dimension_, trusted_dimension_));
}

Assemblage::Assemblage(std::vector<std::size_t> settings, std::vector<std::size_t> outcomes,
                       Dims trusted_dims, std::vector<ComplexMatrix> members)
    : Assemblage(std::move(settings), std::move(outcomes), std::move(trusted_dims)) {
  if (members.size() != members_.size()) {
    throw StructuralError("Assemblage: expected " + std::to_string(members_.size()) +
                          " members, got " + std::to_string(members.size()));
  }
  for (const auto& m : members) {
    if (m.rows() != trusted_dimension_ || m.cols() != trusted_dimension_) {
      throw StructuralError("Assemblage: member does not act on the trusted space");
    }
  }
  members_ = std::move(members);
}

std::size_t Assemblage::flat_index(std::span<const std::size_t> outcome_tuple,
                                   std::span<const std::size_t> setting_tuple) const {
  return flat_index(flatten(outcome_tuple, outcomes_), flatten(setting_tuple, settings_));
}

std::vector<std::size_t> Assemblage::outcome_tuple(std::size_t outcome_flat) const {
  return unflatten(outcome_flat, outcomes_);
}

std::vector<std::size_t> Assemblage::setting_tuple(std::size_t setting_flat) const {
  return unflatten(setting_flat, settings_);
}

ComplexMatrix Assemblage::reduced_state(std::size_t setting_flat) const {
  if (setting_flat >= setting_tuples_) throw StructuralError("reduced_state: bad setting");
  ComplexMatrix sum(trusted_dimension_, trusted_dimension_);
  for (std::size_t a = 0; a < outcome_tuples_; ++a) sum += member(a, setting_flat);
  return sum;
}

double Assemblage::consistency_error() const {
  const ComplexMatrix first = reduced_state(0);
  double worst = 0.0;
  for (std::size_t x = 1; x < setting_tuples_; ++x) {
    worst = std::max(worst, max_abs_diff(reduced_state(x), first));
  }
  return worst;
}

bool Assemblage::same_structure(const Assemblage& other) const {
  return settings_ == other.settings_ && outcomes_ == other.outcomes_ &&
         trusted_dims_ == other.trusted_dims_;
}

void Assemblage::validate(double tol) const {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (!is_hermitian(members_[i])) {
      throw PreconditionError("assemblage member " + std::to_string(i) + " is not Hermitian");
    }
    if (min_eigenvalue(members_[i]) < -tol) {
      throw PreconditionError("assemblage member " + std::to_string(i) + " is not PSD");
    }
  }
  for (std::size_t x = 0; x < setting_tuples_; ++x) {
    if (std::abs(reduced_state(x).trace() - Complex(1.0)) > tol) {
      throw PreconditionError("assemblage does not have unit total trace for setting " +
                              std::to_string(x));
    }
  }
  if (consistency_error() > tol) {
    throw PreconditionError("assemblage reduced state depends on the setting");
  }
}

double assemblage_distance(const Assemblage& a, const Assemblage& b) {
  if (!a.same_structure(b)) throw StructuralError("assemblage_distance: structure mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.member_count(); ++i) {
    acc += trace_distance(a.member(i), b.member(i));
  }
  return acc / static_cast<double>(a.setting_tuple_count());
}

bool ppt_entangled(const ComplexMatrix& sigma, double tol, Dims dims) {
  if (dims.size() != 2 || dims[0] * dims[1] != sigma.rows() || dims[0] * dims[1] > 6) {
    throw StructuralError("ppt_entangled: expects a 2x2 or 2x3 member");
  }
  const double tr = sigma.trace().real();
  if (tr <= tol) throw DomainError("ppt_entangled: member trace is too small to normalize");
  return min_eigenvalue(partial_transpose(sigma * (1.0 / tr), dims, 0)) < -tol;
}

}  // namespace netsteer
