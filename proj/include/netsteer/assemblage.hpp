#ifndef NETSTEER_ASSEMBLAGE_HPP
#define NETSTEER_ASSEMBLAGE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "netsteer/linops.hpp"

namespace netsteer {

inline constexpr double kOptimizerTolerance = 1e-7;
inline constexpr double kAnalyticTolerance = 1e-12;

/// Subnormalized trusted-side operators sigma_{a|x} indexed by an outcome tuple
/// (one outcome per untrusted party) and a setting tuple.
///
/// Members are stored setting-major: flat index = x_flat * |outcome tuples| + a_flat,
/// and both tuples are flattened with party 0 as the most significant digit.
class Assemblage {
 public:
  Assemblage() = default;
  Assemblage(std::vector<std::size_t> settings, std::vector<std::size_t> outcomes,
             Dims trusted_dims);
  Assemblage(std::vector<std::size_t> settings, std::vector<std::size_t> outcomes,
             Dims trusted_dims, std::vector<ComplexMatrix> members);

  const std::vector<std::size_t>& settings() const { return settings_; }
  const std::vector<std::size_t>& outcomes() const { return outcomes_; }
  const Dims& trusted_dims() const { return trusted_dims_; }
  std::size_t party_count() const { return settings_.size(); }
  std::size_t setting_tuple_count() const { return setting_tuples_; }
  std::size_t outcome_tuple_count() const { return outcome_tuples_; }
  std::size_t member_count() const { return members_.size(); }
  std::size_t trusted_dimension() const { return trusted_dimension_; }

  std::size_t flat_index(std::size_t outcome_flat, std::size_t setting_flat) const {
    return setting_flat * outcome_tuples_ + outcome_flat;
  }
  std::size_t flat_index(std::span<const std::size_t> outcome_tuple,
                         std::span<const std::size_t> setting_tuple) const;
  std::vector<std::size_t> outcome_tuple(std::size_t outcome_flat) const;
  std::vector<std::size_t> setting_tuple(std::size_t setting_flat) const;

  const ComplexMatrix& member(std::size_t flat) const { return members_.at(flat); }
  ComplexMatrix& member(std::size_t flat) { return members_.at(flat); }
  const ComplexMatrix& member(std::size_t outcome_flat, std::size_t setting_flat) const {
    return members_.at(flat_index(outcome_flat, setting_flat));
  }
  std::span<const ComplexMatrix> members() const { return members_; }

  // sum over outcome tuples for a fixed setting tuple
  ComplexMatrix reduced_state(std::size_t setting_flat = 0) const;
  // max-abs deviation of reduced states across setting tuples
  double consistency_error() const;
  bool same_structure(const Assemblage& other) const;

  // Hermitian within 1e-9, PSD and unit total trace within tol, consistent within tol.
  void validate(double tol = kOptimizerTolerance) const;

 private:
  std::vector<std::size_t> settings_;
  std::vector<std::size_t> outcomes_;
  Dims trusted_dims_;
  std::size_t setting_tuples_ = 0;
  std::size_t outcome_tuples_ = 0;
  std::size_t trusted_dimension_ = 0;
  std::vector<ComplexMatrix> members_;
};

/// (1 / prod_j N_j) * sum over members of the trace distance.
double assemblage_distance(const Assemblage& a, const Assemblage& b);

/// PPT test on a 2x2 (or 2x3) member: true iff the normalized member's partial
/// transpose on the first factor has an eigenvalue below -tol.
bool ppt_entangled(const ComplexMatrix& sigma, double tol = 1e-9, Dims dims = {2, 2});

}  // namespace netsteer

#endif  // NETSTEER_ASSEMBLAGE_HPP
