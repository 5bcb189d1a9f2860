#ifndef NETSTEER_OPTIMIZER_HPP
#define NETSTEER_OPTIMIZER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "netsteer/local_model.hpp"

namespace netsteer {

struct OptimizerConfig {
  std::size_t iterations = 20000;  // per restart, shared by the stages
  std::size_t restarts = 5;
  double learning_rate = 1e-2;
  double lr_decay = 0.5;
  std::size_t plateau_patience = 400;
  double min_learning_rate = 1e-6;
  std::vector<double> beta_schedule{1.0, 10.0, 100.0};
  double epsilon = 1e-8;
  double epsilon_decay = 0.1;
  // a restart stops once D_A and the residual are both below this
  double tolerance = 1e-7;
  double residual_tolerance = 1e-6;
  std::size_t hidden_width = 0;  // 0 selects direct tables
  double init_scale = 0.3;
  std::uint64_t seed = 1;

  void validate() const;
};

enum class BlockKind { source, response, state };

// A contiguous slice of theta producing `width` raw outputs for each of `rows`
// inputs. With a hidden layer the row index is one-hot encoded per radix.
struct ParamBlock {
  BlockKind kind;
  std::size_t owner = 0;  // source i, untrusted party j or trusted party k
  std::size_t rows = 0;
  std::size_t width = 0;
  std::vector<std::size_t> radices;
  std::size_t offset = 0;
  std::size_t size = 0;
};

struct ModelGradient {
  std::vector<std::vector<double>> source_distributions;
  std::vector<std::vector<double>> responses;
  // dL = Re <g, d psi> for each pure hidden state
  std::vector<std::vector<Ket>> hidden_states;
};

/// Unconstrained parameters theta and the forward map theta -> LocalModel.
///
/// Probability tables come from softmax over raw outputs; hidden states from
/// normalizing raw (real, imag) coefficient pairs.
class ParametrizedModel {
 public:
  ParametrizedModel(ModelShape shape, std::size_t hidden_width);

  const ModelShape& shape() const { return shape_; }
  std::size_t hidden_width() const { return hidden_width_; }
  const std::vector<ParamBlock>& blocks() const { return blocks_; }
  std::vector<double>& parameters() { return theta_; }
  const std::vector<double>& parameters() const { return theta_; }
  std::size_t parameter_count() const { return theta_.size(); }

  void randomize(std::mt19937_64& rng, double scale);

  // Raw block outputs [block][row * width + t].
  std::vector<std::vector<double>> raw_outputs() const;
  // Probabilities and pure hidden-state kets.
  void decode(const std::vector<std::vector<double>>& raw,
              std::vector<std::vector<double>>& sources,
              std::vector<std::vector<double>>& responses,
              std::vector<std::vector<Ket>>& kets) const;
  LocalModel forward() const;
  // Chain rule from model-level gradients back to theta.
  std::vector<double> backward(const std::vector<std::vector<double>>& raw,
                               const ModelGradient& g) const;

 private:
  ModelShape shape_;
  std::size_t hidden_width_;
  std::vector<ParamBlock> blocks_;
  std::vector<double> theta_;
};

ParametrizedModel build_parametrized_model(const Scenario& scenario,
                                           const HiddenVariableSpec& hidden,
                                           std::size_t hidden_width, std::uint64_t seed);

struct LossValue {
  double loss = 0.0;
  double distance = 0.0;  // raw D_A
  double residual = 0.0;  // trace distance between reduced states
  std::vector<double> gradient;
};

/// D_A(target, model) + beta * TD(model reduced state, target reduced state),
/// with |mu| smoothed as sqrt(mu^2 + eps^2) on the eigenvalues of each difference.
class LossFunction {
 public:
  LossFunction(const ParametrizedModel& model, const Assemblage& target);
  LossValue evaluate(const ParametrizedModel& model, double beta, double epsilon,
                     bool with_gradient = true) const;

 private:
  Assemblage target_;
  ComplexMatrix target_reduced_;
  std::vector<std::vector<std::size_t>> setting_tuples_;
  std::vector<std::vector<std::size_t>> outcome_tuples_;
};

LossValue loss(const ParametrizedModel& model, const Assemblage& target, double beta,
               double epsilon);

struct LossTracePoint {
  std::size_t restart = 0;
  std::size_t iteration = 0;
  double loss = 0.0;
  double distance = 0.0;
  double residual = 0.0;
};

struct SteerabilityResult {
  double value = 0.0;  // raw D_A of the best model
  double residual = 0.0;
  bool converged = false;
  LocalModel best_model;
  std::vector<double> best_parameters;
  std::vector<double> restart_values;
  std::size_t iterations_used = 0;
};

using TraceSink = std::function<void(const LossTracePoint&)>;

SteerabilityResult optimize(const Assemblage& target, const Scenario& scenario,
                            const HiddenVariableSpec& hidden, const OptimizerConfig& config,
                            const TraceSink& trace = {}, std::size_t trace_stride = 100);

}  // namespace netsteer

#endif  // NETSTEER_OPTIMIZER_HPP
