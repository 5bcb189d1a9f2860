#ifndef NETSTEER_SCENARIO_HPP
#define NETSTEER_SCENARIO_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "netsteer/assemblage.hpp"
#include "netsteer/quantum.hpp"

namespace netsteer {

/// Sources, untrusted parties and trusted parties connected by the incidence
/// matrices I (sources x untrusted) and I_hat (sources x trusted).
struct NetworkTopology {
  std::size_t source_count = 0;
  std::size_t untrusted_count = 0;
  std::size_t trusted_count = 0;
  std::vector<std::vector<int>> incidence_untrusted;
  std::vector<std::vector<int>> incidence_trusted;
  std::vector<std::size_t> settings;  // N_j
  std::vector<std::size_t> outcomes;  // O_j

  // Binary entries, consistent shapes, and every source feeding a trusted
  // party also feeds an untrusted one.
  void validate() const;
  std::vector<std::size_t> sources_of_untrusted(std::size_t j) const;
  std::vector<std::size_t> sources_of_trusted(std::size_t k) const;
  std::size_t setting_tuple_count() const;
  std::size_t outcome_tuple_count() const;
};

enum class PartyKind { untrusted, trusted };

struct PartySlot {
  PartyKind kind;
  std::size_t party;
};

// A source state and, for each of its tensor factors, the party receiving it.
struct SourceState {
  DensityOperator state;
  std::vector<PartySlot> slots;
};

/// Canonical subsystem layout: the joint state is the tensor product of the
/// sources in index order. A party owning several factors acts on them in that
/// same order, so for the bilocal chain the joint space reads (B1, A1, A2, B2)
/// and the Bell-state measurement acts on the middle pair.
struct Scenario {
  NetworkTopology topology;
  std::vector<SourceState> sources;
  std::vector<std::vector<Povm>> measurements;  // [party][setting]
  Dims trusted_dims;

  void validate() const;
};

enum class ScenarioKind { bipartite, one_untrusted, two_untrusted, bilocal };

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& name);

// Isotropic state of dimension d, untrusted party measuring the first N MUBs.
Scenario bipartite_scenario(std::size_t d, std::size_t settings, double visibility);
// Noisy GHZ on (A, B1, B2); A measures the first N of Z, X, Y.
Scenario ghz_one_untrusted_scenario(std::size_t settings, double visibility);
// Noisy GHZ on (A1, A2, B); both untrusted parties measure the first N of Z, X, Y.
Scenario ghz_two_untrusted_scenario(std::size_t settings, double visibility);
// Two-qubit isotropic states rho1 on (B1, A) and rho2 on (A, B2); A performs a BSM.
Scenario bilocal_scenario(double v, double w);

Assemblage compute_assemblage(const Scenario& scenario);

/// Closed form: sigma_a = (vw/4)|Bell_a><Bell_a| + (1 - vw) I / 16.
Assemblage bilocal_assemblage(double v, double w);

}  // namespace netsteer

#endif  // NETSTEER_SCENARIO_HPP
