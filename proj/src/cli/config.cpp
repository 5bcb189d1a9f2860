#include "netsteer/cli/config.hpp"

#include <cmath>
#include <set>

#include "netsteer/errors.hpp"

namespace netsteer::cli {

std::string to_string(Engine e) {
  switch (e) {
    case Engine::ann: return "ann";
    case Engine::sdp: return "sdp";
    case Engine::both: return "both";
  }
  return "unknown";
}

Engine engine_from_string(const std::string& name) {
  if (name == "ann") return Engine::ann;
  if (name == "sdp") return Engine::sdp;
  if (name == "both") return Engine::both;
  throw ConfigError("unknown engine '" + name + "' (expected ann, sdp or both)");
}

std::vector<double> Range::values() const {
  std::vector<double> out;
  if (!(step > 0.0) || stop < start) return out;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k) out.push_back(std::min(start + static_cast<double>(k) * step, stop));
  return out;
}

Scenario ScenarioSpec::build(double v, double w) const {
  switch (kind) {
    case ScenarioKind::bipartite: return bipartite_scenario(dimension, settings, v);
    case ScenarioKind::one_untrusted: return ghz_one_untrusted_scenario(settings, v);
    case ScenarioKind::two_untrusted: return ghz_two_untrusted_scenario(settings, v);
    case ScenarioKind::bilocal: return bilocal_scenario(v, w);
  }
  throw ConfigError("unknown scenario kind");
}

HiddenVariableSpec ScenarioSpec::default_hidden() const {
  return default_hidden_spec(kind, dimension, settings);
}

void RunConfig::validate() const {
  if (scenarios.empty()) throw ConfigError("no scenarios configured");
  for (const auto& s : scenarios) {
    try {
      s.build(0.5, 0.5);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("invalid scenario: ") + e.what());
    }
  }
  const auto check_range = [](const Range& r, const char* name) {
    if (!(r.step > 0.0)) throw ConfigError(std::string(name) + ": step must be positive");
    if (r.values().empty()) throw ConfigError(std::string(name) + ": empty grid");
    if (r.start < 0.0 || r.stop > 1.0) throw ConfigError(std::string(name) + ": visibilities must lie in [0, 1]");
  };
  check_range(v, "v");
  check_range(w, "w");
  if (!hidden_cardinalities.empty() && scenarios.size() > 1) {
    throw ConfigError("explicit hidden cardinalities need a single scenario");
  }
  try {
    optimizer.validate();
    sdp.validate();
    if (!hidden_cardinalities.empty()) HiddenVariableSpec{hidden_cardinalities}.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (!(thresholds.low < thresholds.high) || thresholds.low < 0.0 || thresholds.high > 1.0) {
    throw ConfigError("thresholds: need 0 <= low < high <= 1");
  }
  if (!(thresholds.tolerance > 0.0)) throw ConfigError("thresholds: tolerance must be positive");
  if (!(thresholds.sdp_cutoff > 0.0) || !(thresholds.ann_cutoff > 0.0)) {
    throw ConfigError("thresholds: cutoffs must be positive");
  }
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

std::vector<GridPoint> RunConfig::grid() const {
  std::vector<GridPoint> out;
  for (const auto& s : scenarios) {
    for (double a : v.values()) {
      if (s.kind != ScenarioKind::bilocal) {
        out.push_back({out.size(), s, a, 0.0});
      } else if (diagonal) {
        out.push_back({out.size(), s, a, a});
      } else {
        for (double b : w.values()) out.push_back({out.size(), s, a, b});
      }
    }
  }
  return out;
}

std::uint64_t RunConfig::point_seed(std::size_t index) const {
  return seed * 1000003ULL + static_cast<std::uint64_t>(index);
}

namespace {

Json range_json(const Range& r) { return Json{{"start", r.start}, {"stop", r.stop}, {"step", r.step}}; }

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

Range range_from_json(const Json& j, Range r, const std::string& where) {
  check_keys(j, {"start", "stop", "step"}, where);
  read(j, "start", r.start);
  read(j, "stop", r.stop);
  read(j, "step", r.step);
  return r;
}

Json optimizer_json(const OptimizerConfig& o) {
  return Json{{"iterations", o.iterations},
              {"restarts", o.restarts},
              {"learning_rate", o.learning_rate},
              {"lr_decay", o.lr_decay},
              {"plateau_patience", o.plateau_patience},
              {"min_learning_rate", o.min_learning_rate},
              {"beta_schedule", o.beta_schedule},
              {"epsilon", o.epsilon},
              {"epsilon_decay", o.epsilon_decay},
              {"tolerance", o.tolerance},
              {"residual_tolerance", o.residual_tolerance},
              {"hidden_width", o.hidden_width},
              {"init_scale", o.init_scale}};
}

OptimizerConfig optimizer_from_json(const Json& j, OptimizerConfig o) {
  check_keys(j, {"iterations", "restarts", "learning_rate", "lr_decay", "plateau_patience", "min_learning_rate",
                 "beta_schedule", "epsilon", "epsilon_decay", "tolerance", "residual_tolerance", "hidden_width",
                 "init_scale"},
             "optimizer");
  read(j, "iterations", o.iterations);
  read(j, "restarts", o.restarts);
  read(j, "learning_rate", o.learning_rate);
  read(j, "lr_decay", o.lr_decay);
  read(j, "plateau_patience", o.plateau_patience);
  read(j, "min_learning_rate", o.min_learning_rate);
  read(j, "beta_schedule", o.beta_schedule);
  read(j, "epsilon", o.epsilon);
  read(j, "epsilon_decay", o.epsilon_decay);
  read(j, "tolerance", o.tolerance);
  read(j, "residual_tolerance", o.residual_tolerance);
  read(j, "hidden_width", o.hidden_width);
  read(j, "init_scale", o.init_scale);
  return o;
}

Json solver_json(const SolverSettings& s) {
  return Json{{"tolerance", s.tolerance},
              {"max_iterations", s.max_iterations},
              {"rho", s.rho},
              {"relaxation", s.relaxation},
              {"adapt_interval", s.adapt_interval},
              {"adapt_threshold", s.adapt_threshold},
              {"anderson_memory", s.anderson_memory}};
}

SolverSettings solver_from_json(const Json& j, SolverSettings s) {
  check_keys(j, {"tolerance", "max_iterations", "rho", "relaxation", "adapt_interval", "adapt_threshold",
                 "anderson_memory"},
             "sdp");
  read(j, "tolerance", s.tolerance);
  read(j, "max_iterations", s.max_iterations);
  read(j, "rho", s.rho);
  read(j, "relaxation", s.relaxation);
  read(j, "adapt_interval", s.adapt_interval);
  read(j, "adapt_threshold", s.adapt_threshold);
  read(j, "anderson_memory", s.anderson_memory);
  return s;
}

}  // namespace

std::vector<ScenarioSpec> default_threshold_targets() {
  std::vector<ScenarioSpec> out;
  for (std::size_t n : {2u, 3u}) {
    for (std::size_t d = 2; d <= 5; ++d) out.push_back({ScenarioKind::bipartite, d, n});
  }
  for (std::size_t n : {2u, 3u}) out.push_back({ScenarioKind::one_untrusted, 2, n});
  for (std::size_t n : {2u, 3u}) out.push_back({ScenarioKind::two_untrusted, 2, n});
  return out;
}

Json to_json(const ScenarioSpec& s) {
  return Json{{"kind", to_string(s.kind)}, {"dimension", s.dimension}, {"settings", s.settings}};
}

ScenarioSpec scenario_spec_from_json(const Json& j) {
  check_keys(j, {"kind", "dimension", "settings"}, "scenario");
  ScenarioSpec s;
  if (!j.contains("kind")) throw ConfigError("scenario: missing kind");
  try {
    s.kind = scenario_kind_from_string(j.at("kind").get<std::string>());
  } catch (const StructuralError& e) {
    throw ConfigError(e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  read(j, "dimension", s.dimension);
  read(j, "settings", s.settings);
  if (s.kind == ScenarioKind::bilocal) s.settings = 1;
  if (s.kind != ScenarioKind::bipartite) s.dimension = 2;
  return s;
}

Json to_json(const RunConfig& c) {
  Json scenarios = Json::array();
  for (const auto& s : c.scenarios) scenarios.push_back(to_json(s));
  Json targets = Json::array();
  for (const auto& s : c.thresholds.targets) targets.push_back(to_json(s));
  return Json{{"scenarios", std::move(scenarios)},
              {"v", range_json(c.v)},
              {"w", range_json(c.w)},
              {"diagonal", c.diagonal},
              {"hidden_cardinalities", c.hidden_cardinalities},
              {"optimizer", optimizer_json(c.optimizer)},
              {"sdp", solver_json(c.sdp)},
              {"engine", to_string(c.engine)},
              {"thresholds",
               Json{{"targets", std::move(targets)},
                    {"low", c.thresholds.low},
                    {"high", c.thresholds.high},
                    {"tolerance", c.thresholds.tolerance},
                    {"sdp_cutoff", c.thresholds.sdp_cutoff},
                    {"ann_cutoff", c.thresholds.ann_cutoff}}},
              {"dump_sdp", c.dump_sdp},
              {"output_dir", c.output_dir},
              {"seed", c.seed},
              {"jobs", c.jobs}};
}

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  try {
    check_keys(j, {"scenarios", "v", "w", "diagonal", "hidden_cardinalities", "optimizer", "sdp", "engine",
                   "thresholds", "dump_sdp", "output_dir", "seed", "jobs"},
               "config");
    if (j.contains("scenarios")) {
      c.scenarios.clear();
      for (const auto& s : j.at("scenarios")) c.scenarios.push_back(scenario_spec_from_json(s));
    }
    if (j.contains("v")) c.v = range_from_json(j.at("v"), c.v, "v");
    if (j.contains("w")) c.w = range_from_json(j.at("w"), c.w, "w");
    read(j, "diagonal", c.diagonal);
    read(j, "hidden_cardinalities", c.hidden_cardinalities);
    if (j.contains("optimizer")) c.optimizer = optimizer_from_json(j.at("optimizer"), c.optimizer);
    if (j.contains("sdp")) c.sdp = solver_from_json(j.at("sdp"), c.sdp);
    if (j.contains("engine")) c.engine = engine_from_string(j.at("engine").get<std::string>());
    if (j.contains("thresholds")) {
      const auto& t = j.at("thresholds");
      check_keys(t, {"targets", "low", "high", "tolerance", "sdp_cutoff", "ann_cutoff"}, "thresholds");
      if (t.contains("targets")) {
        c.thresholds.targets.clear();
        for (const auto& s : t.at("targets")) c.thresholds.targets.push_back(scenario_spec_from_json(s));
      }
      read(t, "low", c.thresholds.low);
      read(t, "high", c.thresholds.high);
      read(t, "tolerance", c.thresholds.tolerance);
      read(t, "sdp_cutoff", c.thresholds.sdp_cutoff);
      read(t, "ann_cutoff", c.thresholds.ann_cutoff);
    }
    read(j, "dump_sdp", c.dump_sdp);
    read(j, "output_dir", c.output_dir);
    read(j, "seed", c.seed);
    read(j, "jobs", c.jobs);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.optimizer.seed = c.seed;
  return c;
}

}  // namespace netsteer::cli
