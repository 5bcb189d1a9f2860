#ifndef NETSTEER_CLI_CONFIG_HPP
#define NETSTEER_CLI_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "netsteer/io.hpp"
#include "netsteer/optimizer.hpp"
#include "netsteer/scenario.hpp"
#include "netsteer/sdp/solver.hpp"

namespace netsteer::cli {

// Invalid or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Engine { ann, sdp, both };
std::string to_string(Engine e);
Engine engine_from_string(const std::string& name);

struct Range {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.05;

  // start, start + step, ... up to stop (inclusive within half a step)
  std::vector<double> values() const;
};

// One scenario instance family: kind plus (d, N) where relevant.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::bipartite;
  std::size_t dimension = 2;
  std::size_t settings = 2;

  Scenario build(double v, double w) const;
  HiddenVariableSpec default_hidden() const;
};

// Bipartite d = 2..5, N = 2, 3, then the four multipartite families.
std::vector<ScenarioSpec> default_threshold_targets();

struct GridPoint {
  std::size_t index = 0;
  ScenarioSpec scenario;
  double v = 0.0;
  double w = 0.0;
};

struct ThresholdConfig {
  std::vector<ScenarioSpec> targets = default_threshold_targets();
  double low = 0.0;
  double high = 1.0;
  double tolerance = 1e-3;
  double sdp_cutoff = 1e-4;
  double ann_cutoff = 5e-4;
};

struct RunConfig {
  // sweep / bounds grid; several scenarios may be listed
  std::vector<ScenarioSpec> scenarios{ScenarioSpec{}};
  Range v{0.0, 1.0, 0.05};
  Range w{0.0, 1.0, 0.05};  // bilocal only
  bool diagonal = false;    // bilocal: use w = v instead of the w range
  std::vector<std::size_t> hidden_cardinalities;  // empty: scenario default
  OptimizerConfig optimizer;
  SolverSettings sdp;
  Engine engine = Engine::both;
  ThresholdConfig thresholds;
  bool dump_sdp = false;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  std::size_t jobs = 0;  // 0: hardware concurrency

  void validate() const;
  std::vector<GridPoint> grid() const;
  // optimizer seed for a grid point, independent of scheduling
  std::uint64_t point_seed(std::size_t index) const;
};

Json to_json(const RunConfig& c);
RunConfig config_from_json(const Json& j);
Json to_json(const ScenarioSpec& s);
ScenarioSpec scenario_spec_from_json(const Json& j);

}  // namespace netsteer::cli

#endif  // NETSTEER_CLI_CONFIG_HPP
