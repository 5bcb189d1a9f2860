#ifndef NETSTEER_CLI_COMMANDS_HPP
#define NETSTEER_CLI_COMMANDS_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "netsteer/cli/config.hpp"

namespace netsteer::cli {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2, kExitVerification = 3 };

// Runs fn(0..count-1) on `jobs` threads (0: hardware concurrency).
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

struct PointResult {
  GridPoint point;
  std::optional<double> ann;
  std::optional<double> lower;
  std::optional<double> upper;
  double robustness = 0.0;
  double ann_residual = 0.0;
  double lower_primal = 0.0, lower_dual = 0.0;
  double upper_primal = 0.0, upper_dual = 0.0;
  bool converged = true;
  std::string status = "ok";
  bool failed() const { return status != "ok"; }
};

PointResult evaluate_point(const RunConfig& config, const GridPoint& point, bool run_ann, bool run_sdp);
std::vector<PointResult> evaluate_grid(const RunConfig& config, bool run_ann, bool run_sdp, std::ostream* log);

// scenario,dimension,settings,v,w,S_ann,S_lb,S_ub,converged,residual,status
void write_sweep_csv(std::ostream& out, const std::vector<PointResult>& rows);
// scenario,dimension,settings,v,w,lower,upper,robustness,lower_primal,lower_dual,upper_primal,upper_dual,converged,status
void write_bounds_csv(std::ostream& out, const std::vector<PointResult>& rows);

struct Bisection {
  bool bracketed = false;
  double low = 0.0;
  double high = 0.0;
  double threshold = 0.0;
  std::size_t evaluations = 0;
};

// Smallest v in [low, high] with above(v), assuming a single crossing.
Bisection bisect_threshold(const std::function<bool(double)>& above, double low, double high, double tolerance);

// Closed-form reference, or nullopt where none is known.
std::optional<double> reference_threshold(const ScenarioSpec& s);

struct ThresholdReport {
  ScenarioSpec target;
  Engine engine;
  Bisection search;
  std::optional<double> reference;
  std::string status = "ok";
};

// Engine must be ann or sdp. Bilocal targets bisect along v = w.
ThresholdReport find_threshold(const RunConfig& config, const ScenarioSpec& target, Engine engine);

struct VerifyReport {
  double max_error = 0.0;
  double min_eigenvalue = 0.0;  // over all replayed hidden states
  std::size_t models_checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::size_t random_points = 500;
  std::optional<double> inject_xi;  // test hook: replay a model at an arbitrary xi
};

VerifyReport verify_models(const VerifyOptions& options);

int cmd_sweep(const RunConfig& config, std::ostream& log);
int cmd_bounds(const RunConfig& config, std::ostream& log);
int cmd_thresholds(const RunConfig& config, std::ostream& log);
int cmd_verify_models(const RunConfig& config, const VerifyOptions& options, std::ostream& log);

}  // namespace netsteer::cli

#endif  // NETSTEER_CLI_COMMANDS_HPP
