#include "netsteer/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "netsteer/analytic.hpp"
#include "netsteer/errors.hpp"
#include "netsteer/local_model.hpp"
#include "netsteer/sdp/steering.hpp"

namespace netsteer::cli {

namespace {

// Console plus <out>/<name>.log, safe to call from workers.
class Logger {
 public:
  Logger(std::ostream& console, const std::filesystem::path& file) : console_(console), file_(file) {}
  void line(const std::string& s) {
    const std::lock_guard lock(mutex_);
    console_ << s << '\n';
    file_ << s << '\n';
  }

 private:
  std::ostream& console_;
  std::ofstream file_;
  std::mutex mutex_;
};

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::filesystem::path prepare_output(const RunConfig& config) {
  const std::filesystem::path out(config.output_dir);
  std::filesystem::create_directories(out);
  write_json_file(out / "config.json", to_json(config));
  return out;
}

HiddenVariableSpec hidden_for(const RunConfig& config, const ScenarioSpec& s) {
  return config.hidden_cardinalities.empty() ? s.default_hidden() : HiddenVariableSpec{config.hidden_cardinalities};
}

std::string point_label(const GridPoint& p) {
  std::ostringstream os;
  os << to_string(p.scenario.kind) << " d=" << p.scenario.dimension << " N=" << p.scenario.settings
     << " v=" << format_number(p.v);
  if (p.scenario.kind == ScenarioKind::bilocal) os << " w=" << format_number(p.w);
  return os.str();
}

template <typename F>
void record_failure(PointResult& r, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    r.status = std::string("error: ") + e.what();
    r.converged = false;
  }
}

}  // namespace

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, count);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  for (std::size_t t = 0; t < jobs; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& w : workers) w.join();
}

PointResult evaluate_point(const RunConfig& config, const GridPoint& point, bool run_ann, bool run_sdp) {
  PointResult r;
  r.point = point;
  Scenario scenario;
  Assemblage target;
  record_failure(r, [&] {
    scenario = point.scenario.build(point.v, point.w);
    target = compute_assemblage(scenario);
  });
  if (r.failed()) return r;
  if (run_ann) {
    record_failure(r, [&] {
      OptimizerConfig cfg = config.optimizer;
      cfg.seed = config.point_seed(point.index);
      const auto res = optimize(target, scenario, hidden_for(config, point.scenario), cfg);
      r.ann = res.value;
      r.ann_residual = res.residual;
      r.converged = r.converged && res.converged;
    });
  }
  if (run_sdp && point.scenario.kind != ScenarioKind::bilocal && !r.failed()) {
    record_failure(r, [&] {
      const auto sdp = build_lower_bound_sdp(target, point.scenario.kind);
      const auto sol = solve_sdp(sdp.problem, config.sdp);
      r.lower = std::max(sol.objective, 0.0);
      r.lower_primal = sol.primal_residual;
      r.lower_dual = sol.dual_residual;
      r.converged = r.converged && sol.converged();
      if (config.dump_sdp) {
        const auto dir = std::filesystem::path(config.output_dir) / "sdp";
        write_json_file(dir / ("point_" + std::to_string(point.index) + "_lower.json"),
                        Json{{"problem", sdp_problem_to_json(sdp.problem)},
                             {"solution", sdp_solution_to_json(sdp.problem, sol)}});
      }
      const auto ub = upper_bound(target, point.scenario.kind, config.sdp);
      r.upper = ub.value;
      r.robustness = ub.robustness.r;
      r.upper_primal = ub.robustness.solution.primal_residual;
      r.upper_dual = ub.robustness.solution.dual_residual;
      r.converged = r.converged && ub.verified;
    });
  }
  return r;
}

std::vector<PointResult> evaluate_grid(const RunConfig& config, bool run_ann, bool run_sdp, std::ostream* log) {
  const auto grid = config.grid();
  std::vector<PointResult> rows(grid.size());
  std::mutex mutex;
  std::size_t done = 0;
  parallel_for(grid.size(), config.jobs, [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    rows[i] = evaluate_point(config, grid[i], run_ann, run_sdp);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (log == nullptr) return;
    const std::lock_guard lock(mutex);
    ++done;
    *log << '[' << done << '/' << grid.size() << "] " << point_label(grid[i]) << " S_ann=" << optional_number(rows[i].ann)
         << " S_lb=" << optional_number(rows[i].lower) << " S_ub=" << optional_number(rows[i].upper) << " "
         << rows[i].status << " (" << format_number(secs) << " s)\n";
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<PointResult>& rows) {
  out << "scenario,dimension,settings,v,w,S_ann,S_lb,S_ub,converged,residual,status\n";
  for (const auto& r : rows) {
    const auto& p = r.point;
    out << to_string(p.scenario.kind) << ',' << p.scenario.dimension << ',' << p.scenario.settings << ','
        << format_number(p.v) << ',' << format_number(p.w) << ',' << optional_number(r.ann) << ','
        << optional_number(r.lower) << ',' << optional_number(r.upper) << ',' << (r.converged ? 1 : 0) << ','
        << format_number(r.ann_residual) << ',' << csv_escape(r.status) << '\n';
  }
}

void write_bounds_csv(std::ostream& out, const std::vector<PointResult>& rows) {
  out << "scenario,dimension,settings,v,w,lower,upper,robustness,lower_primal,lower_dual,upper_primal,upper_dual,"
         "converged,status\n";
  for (const auto& r : rows) {
    const auto& p = r.point;
    out << to_string(p.scenario.kind) << ',' << p.scenario.dimension << ',' << p.scenario.settings << ','
        << format_number(p.v) << ',' << format_number(p.w) << ',' << optional_number(r.lower) << ','
        << optional_number(r.upper) << ',' << format_number(r.robustness) << ',' << format_number(r.lower_primal)
        << ',' << format_number(r.lower_dual) << ',' << format_number(r.upper_primal) << ','
        << format_number(r.upper_dual) << ',' << (r.converged ? 1 : 0) << ',' << csv_escape(r.status) << '\n';
  }
}

Bisection bisect_threshold(const std::function<bool(double)>& above, double low, double high, double tolerance) {
  Bisection b;
  b.low = low;
  b.high = high;
  b.evaluations = 2;
  if (above(low) || !above(high)) return b;
  b.bracketed = true;
  while (b.high - b.low > tolerance) {
    const double mid = 0.5 * (b.low + b.high);
    ++b.evaluations;
    (above(mid) ? b.high : b.low) = mid;
  }
  b.threshold = 0.5 * (b.low + b.high);
  return b;
}

std::optional<double> reference_threshold(const ScenarioSpec& s) {
  switch (s.kind) {
    case ScenarioKind::bipartite:
      if (s.dimension >= 2 && s.dimension <= 5 && (s.settings == 2 || s.settings == 3)) {
        return table1(s.dimension, s.settings).threshold;
      }
      return std::nullopt;
    case ScenarioKind::one_untrusted:
    case ScenarioKind::two_untrusted:
      if (s.settings == 2 || s.settings == 3) return multipartite_threshold(s.kind, s.settings);
      return std::nullopt;
    case ScenarioKind::bilocal:
      return 1.0 / std::sqrt(3.0);
  }
  return std::nullopt;
}

ThresholdReport find_threshold(const RunConfig& config, const ScenarioSpec& target, Engine engine) {
  ThresholdReport rep{target, engine, {}, reference_threshold(target), "ok"};
  if (engine == Engine::both) throw PreconditionError("find_threshold: pick a single engine");
  if (engine == Engine::sdp && target.kind == ScenarioKind::bilocal) {
    rep.status = "not applicable: no SDP bound for the bilocal network";
    return rep;
  }
  const auto hidden = hidden_for(config, target);
  std::size_t evaluation = 0;
  const auto above = [&](double v) {
    const auto scenario = target.build(v, v);
    const auto assemblage = compute_assemblage(scenario);
    if (engine == Engine::sdp) {
      return lower_bound(assemblage, target.kind, config.sdp).value > config.thresholds.sdp_cutoff;
    }
    OptimizerConfig cfg = config.optimizer;
    cfg.seed = config.point_seed(evaluation++);
    return optimize(assemblage, scenario, hidden, cfg).value > config.thresholds.ann_cutoff;
  };
  try {
    rep.search = bisect_threshold(above, config.thresholds.low, config.thresholds.high, config.thresholds.tolerance);
    if (!rep.search.bracketed) rep.status = "interval does not bracket a threshold";
  } catch (const std::exception& e) {
    rep.status = std::string("error: ") + e.what();
  }
  return rep;
}

VerifyReport verify_models(const VerifyOptions& options) {
  VerifyReport rep;
  rep.min_eigenvalue = 1.0;
  const auto check = [&](const LocalModel& model, const Assemblage& expected, const std::string& label) {
    ++rep.models_checked;
    double worst_eig = 1.0;
    for (const auto& bank : model.hidden_states) {
      for (const auto& s : bank) worst_eig = std::min(worst_eig, min_eigenvalue(s));
    }
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, worst_eig);
    double err = 0.0;
    try {
      err = assemblage_distance(model_assemblage(model), expected);
    } catch (const std::exception& e) {
      rep.failures.push_back(label + ": " + e.what());
      return;
    }
    rep.max_error = std::max(rep.max_error, err);
    if (!(err < 1e-10)) rep.failures.push_back(label + ": reconstruction error " + format_number(err));
    if (worst_eig < -1e-12) rep.failures.push_back(label + ": hidden state eigenvalue " + format_number(worst_eig));
  };

  const double edge = 1.0 / std::numbers::sqrt2;
  for (int k = 0; k <= 100; ++k) {
    const double v = edge * k / 100.0;
    check(lhs_model_d2n2(v), compute_assemblage(bipartite_scenario(2, 2, v)), "lhs d=2 N=2 v=" + format_number(v));
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < options.random_points; ++k) {
    const double v = unit(rng);
    const double w = std::min(1.0, 1.0 / (3.0 * std::max(v, 1e-300))) * unit(rng);
    check(nlhs_model_bilocal(v, w), bilocal_assemblage(v, w),
          "nlhs v=" + format_number(v) + " w=" + format_number(w));
  }
  for (int k = 0; k <= 20; ++k) {
    const double v = 1.0 / 3.0 + (2.0 / 3.0) * k / 20.0;
    const double w = 1.0 / (3.0 * v);
    check(nlhs_model_bilocal(v, w), bilocal_assemblage(v, w),
          "nlhs boundary v=" + format_number(v) + " w=" + format_number(w));
  }
  const double s3 = 1.0 / std::sqrt(3.0);
  const auto corner = nlhs_model_bilocal_from(s3, s3);
  check(corner, bilocal_assemblage(s3, s3), "nlhs xi=zeta=1/sqrt3");
  double corner_eig = 1.0;
  for (const auto& bank : corner.hidden_states) {
    for (const auto& s : bank) corner_eig = std::min(corner_eig, min_eigenvalue(s));
  }
  if (std::abs(corner_eig) > 1e-12) {
    rep.failures.push_back("nlhs xi=zeta=1/sqrt3: expected a singular hidden state, min eigenvalue " +
                           format_number(corner_eig));
  }
  if (options.inject_xi) {
    const double xi = *options.inject_xi;
    check(nlhs_model_bilocal_from(xi, xi), bilocal_assemblage(xi, xi), "injected xi=zeta=" + format_number(xi));
  }
  return rep;
}

int cmd_sweep(const RunConfig& config, std::ostream& log) {
  const auto out = prepare_output(config);
  std::ostringstream text;
  const auto rows = evaluate_grid(config, config.engine != Engine::sdp, config.engine != Engine::ann, &text);
  Logger logger(log, out / "sweep.log");
  std::istringstream lines(text.str());
  for (std::string l; std::getline(lines, l);) logger.line(l);
  std::ofstream csv(out / "sweep.csv");
  write_sweep_csv(csv, rows);
  const bool failed = std::any_of(rows.begin(), rows.end(), [](const PointResult& r) { return r.failed(); });
  logger.line("wrote " + (out / "sweep.csv").string() + " (" + std::to_string(rows.size()) + " rows)");
  return failed ? kExitNumerical : kExitOk;
}

int cmd_bounds(const RunConfig& config, std::ostream& log) {
  const auto out = prepare_output(config);
  std::ostringstream text;
  const auto rows = evaluate_grid(config, false, true, &text);
  Logger logger(log, out / "bounds.log");
  std::istringstream lines(text.str());
  for (std::string l; std::getline(lines, l);) logger.line(l);
  std::ofstream csv(out / "bounds.csv");
  write_bounds_csv(csv, rows);
  const bool failed = std::any_of(rows.begin(), rows.end(), [](const PointResult& r) { return r.failed(); });
  logger.line("wrote " + (out / "bounds.csv").string() + " (" + std::to_string(rows.size()) + " rows)");
  return failed ? kExitNumerical : kExitOk;
}

int cmd_thresholds(const RunConfig& config, std::ostream& log) {
  const auto out = prepare_output(config);
  Logger logger(log, out / "thresholds.log");
  std::vector<Engine> engines;
  if (config.engine != Engine::sdp) engines.push_back(Engine::ann);
  if (config.engine != Engine::ann) engines.push_back(Engine::sdp);
  struct Job {
    ScenarioSpec target;
    Engine engine;
  };
  std::vector<Job> jobs;
  for (const auto& t : config.thresholds.targets) {
    for (auto e : engines) jobs.push_back({t, e});
  }
  std::vector<ThresholdReport> reports(jobs.size());
  parallel_for(jobs.size(), config.jobs, [&](std::size_t i) {
    reports[i] = find_threshold(config, jobs[i].target, jobs[i].engine);
    const auto& r = reports[i];
    logger.line(to_string(r.target.kind) + " d=" + std::to_string(r.target.dimension) + " N=" +
                std::to_string(r.target.settings) + " engine=" + to_string(r.engine) +
                " threshold=" + (r.search.bracketed ? format_number(r.search.threshold) : std::string("n/a")) +
                " reference=" + optional_number(r.reference) + " " + r.status);
  });
  Json list = Json::array();
  std::ofstream csv(out / "thresholds.csv");
  csv << "scenario,dimension,settings,engine,threshold,reference,deviation,evaluations,status\n";
  bool failed = false;
  for (const auto& r : reports) {
    std::optional<double> found, deviation;
    if (r.search.bracketed) found = r.search.threshold;
    if (found && r.reference) deviation = std::abs(*found - *r.reference);
    failed = failed || r.status != "ok";
    list.push_back(Json{{"scenario", to_string(r.target.kind)},
                        {"dimension", r.target.dimension},
                        {"settings", r.target.settings},
                        {"engine", to_string(r.engine)},
                        {"bracketed", r.search.bracketed},
                        {"threshold", found ? Json(*found) : Json(nullptr)},
                        {"interval", Json::array({r.search.low, r.search.high})},
                        {"evaluations", r.search.evaluations},
                        {"reference", r.reference ? Json(*r.reference) : Json(nullptr)},
                        {"deviation", deviation ? Json(*deviation) : Json(nullptr)},
                        {"status", r.status}});
    csv << to_string(r.target.kind) << ',' << r.target.dimension << ',' << r.target.settings << ','
        << to_string(r.engine) << ',' << optional_number(found) << ',' << optional_number(r.reference) << ','
        << optional_number(deviation) << ',' << r.search.evaluations << ',' << csv_escape(r.status) << '\n';
  }
  write_json_file(out / "thresholds.json", Json{{"tolerance", config.thresholds.tolerance},
                                                {"sdp_cutoff", config.thresholds.sdp_cutoff},
                                                {"ann_cutoff", config.thresholds.ann_cutoff},
                                                {"results", std::move(list)}});
  logger.line("wrote " + (out / "thresholds.json").string());
  return failed ? kExitNumerical : kExitOk;
}

int cmd_verify_models(const RunConfig& config, const VerifyOptions& options, std::ostream& log) {
  const auto out = prepare_output(config);
  Logger logger(log, out / "verify_models.log");
  const auto rep = verify_models(options);
  logger.line("models checked: " + std::to_string(rep.models_checked));
  logger.line("max reconstruction error: " + format_number(rep.max_error));
  logger.line("min hidden-state eigenvalue: " + format_number(rep.min_eigenvalue));
  for (const auto& f : rep.failures) logger.line("FAIL " + f);
  write_json_file(out / "verify_models.json", Json{{"models_checked", rep.models_checked},
                                                   {"max_error", rep.max_error},
                                                   {"min_eigenvalue", rep.min_eigenvalue},
                                                   {"failures", rep.failures},
                                                   {"ok", rep.ok()}});
  return rep.ok() ? kExitOk : kExitVerification;
}

}  // namespace netsteer::cli
