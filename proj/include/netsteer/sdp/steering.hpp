#ifndef NETSTEER_SDP_STEERING_HPP
#define NETSTEER_SDP_STEERING_HPP

#include <cstddef>
#include <vector>

#include "netsteer/assemblage.hpp"
#include "netsteer/scenario.hpp"
#include "netsteer/sdp/solver.hpp"

namespace netsteer {

inline constexpr std::size_t kStrategyCap = 4096;

/// Deterministic response functions, one outcome per setting of every party.
/// Strategies are in lexicographic order: party 0 most significant, and within
/// a party setting 0 most significant.
class DeterministicStrategySet {
 public:
  DeterministicStrategySet(std::vector<std::size_t> settings, std::vector<std::size_t> outcomes,
                           std::size_t cap = kStrategyCap);

  std::size_t size() const { return count_; }
  std::size_t party_count() const { return settings_.size(); }
  const std::vector<std::size_t>& settings() const { return settings_; }
  const std::vector<std::size_t>& outcomes() const { return outcomes_; }
  // outcome of party j on setting x_j under strategy l
  std::size_t outcome(std::size_t l, std::size_t j, std::size_t x) const;
  // the unique outcome tuple (flattened) with D(a|x, l) = 1
  std::size_t outcome_flat(std::size_t l, std::size_t setting_flat) const;
  // 0/1 value of D(a|x, l) on flattened tuples
  int response(std::size_t l, std::size_t outcome_flat, std::size_t setting_flat) const;

 private:
  std::vector<std::size_t> settings_;
  std::vector<std::size_t> outcomes_;
  std::size_t count_ = 1;
  std::vector<std::vector<std::size_t>> tables_;  // [l][j * max_settings + x]
  std::size_t stride_ = 0;
};

DeterministicStrategySet enumerate_strategies(std::size_t settings, std::size_t outcomes,
                                              std::size_t cap = kStrategyCap);

// Variable layout of one of the steering SDPs.
struct SteeringSdp {
  ScenarioKind kind;
  DeterministicStrategySet strategies;
  SdpProblem problem;
  std::vector<std::size_t> sigma_blocks;       // sigma_l (or (1+r) sigma_l for robustness)
  std::vector<std::size_t> transpose_blocks;   // partial transposes, 1-UNT only
  std::size_t eta_block = 0;                   // lower bound
  std::vector<std::size_t> slack_blocks;       // lower bound, (+, -) per member
  std::vector<std::size_t> noise_blocks;       // robustness, r * pi per member
  std::size_t r_block = 0;                     // robustness
};

SteeringSdp build_lower_bound_sdp(const Assemblage& target, ScenarioKind kind,
                                  std::size_t cap = kStrategyCap);
SteeringSdp build_robustness_sdp(const Assemblage& target, ScenarioKind kind,
                                 std::size_t cap = kStrategyCap);

struct BoundResult {
  double value = 0.0;
  bool verified = false;  // solver converged
  SdpSolution solution;
};

BoundResult lower_bound(const Assemblage& target, ScenarioKind kind,
                        const SolverSettings& settings = {}, const SolverWarmStart* warm = nullptr);

struct RobustnessResult {
  double r = 0.0;
  bool verified = false;
  Assemblage noise;     // pi, normalized so that sum_a pi_{a|x} = rho
  Assemblage smeared;   // (target + r pi) / (1 + r)
  SdpSolution solution;
};

RobustnessResult robustness(const Assemblage& target, ScenarioKind kind,
                            const SolverSettings& settings = {});

struct UpperBoundResult {
  double value = 0.0;
  bool verified = false;
  RobustnessResult robustness;
};

UpperBoundResult upper_bound(const Assemblage& target, ScenarioKind kind,
                             const SolverSettings& settings = {});
double upper_bound(const Assemblage& target, const RobustnessResult& robustness);

}  // namespace netsteer

#endif  // NETSTEER_SDP_STEERING_HPP
