#ifndef NETSTEER_LOCAL_MODEL_HPP
#define NETSTEER_LOCAL_MODEL_HPP

#include <cstddef>
#include <vector>

#include "netsteer/assemblage.hpp"
#include "netsteer/scenario.hpp"

namespace netsteer {

// One hidden-variable cardinality per source; the input set is their product.
struct HiddenVariableSpec {
  std::vector<std::size_t> cardinalities;

  std::size_t input_count() const;
  // source 0 is the most significant digit
  std::vector<std::size_t> input_tuple(std::size_t flat) const;
  void validate() const;
};

// Lambda = d^N (bipartite), 2^(N+1) (one untrusted), 2^(2N) (two untrusted), 4 x 4 (bilocal).
HiddenVariableSpec default_hidden_spec(ScenarioKind kind, std::size_t dimension,
                                       std::size_t settings);

/// Index bookkeeping tying a hidden-variable spec to a topology.
///
/// lambda_[j] (the hidden variables seen by party j) is flattened over the
/// sources connected to j, in source order, first source most significant.
struct ModelShape {
  NetworkTopology topology;
  Dims trusted_dims;
  HiddenVariableSpec hidden;

  std::vector<std::vector<std::size_t>> untrusted_sources;
  std::vector<std::vector<std::size_t>> trusted_sources;
  std::vector<std::size_t> untrusted_lambda_count;
  std::vector<std::size_t> trusted_lambda_count;
  // [input flat][party] -> restricted index
  std::vector<std::vector<std::size_t>> untrusted_index;
  std::vector<std::vector<std::size_t>> trusted_index;

  static ModelShape make(const NetworkTopology& topology, const Dims& trusted_dims,
                         const HiddenVariableSpec& hidden);
  static ModelShape make(const Scenario& scenario, const HiddenVariableSpec& hidden) {
    return make(scenario.topology, scenario.trusted_dims, hidden);
  }

  std::size_t input_count() const { return untrusted_index.size(); }
  std::size_t trusted_dimension() const;
  // offset of P(. | x, l) in party j's response table
  std::size_t response_offset(std::size_t j, std::size_t x, std::size_t l) const {
    return (x * untrusted_lambda_count[j] + l) * topology.outcomes[j];
  }
  bool compatible_with(const NetworkTopology& other, const Dims& other_dims) const;
};

/// (N)LHS model: source distributions, response tables and hidden states.
/// Hidden states are density matrices so that mixed-state analytic models fit.
struct LocalModel {
  ModelShape shape;
  std::vector<std::vector<double>> source_distributions;  // [i][lambda_i]
  std::vector<std::vector<double>> responses;             // [j][response_offset + a]
  std::vector<std::vector<ComplexMatrix>> hidden_states;  // [k][lambda_[k]]

  // Zero-filled tables of the right sizes.
  static LocalModel empty(const ModelShape& shape);

  double response(std::size_t j, std::size_t a, std::size_t x, std::size_t l) const {
    return responses[j][shape.response_offset(j, x, l) + a];
  }
  double& response(std::size_t j, std::size_t a, std::size_t x, std::size_t l) {
    return responses[j][shape.response_offset(j, x, l) + a];
  }
  void validate(double tol = 1e-9) const;
};

// sigma_{a|x} = sum_lambda prod_i P_i prod_j P(a_j|x_j, lambda_[j]) (x)_k sigma_{lambda_[k]}
Assemblage model_assemblage(const LocalModel& model);
Assemblage model_assemblage(const LocalModel& model, const Scenario& scenario);

}  // namespace netsteer

#endif  // NETSTEER_LOCAL_MODEL_HPP
