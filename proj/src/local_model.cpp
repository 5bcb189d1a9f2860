#include "netsteer/local_model.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "netsteer/errors.hpp"

namespace netsteer {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t k = 0; k < exp; ++k) r *= base;
  return r;
}

std::size_t restricted(const std::vector<std::size_t>& tuple,
                       const std::vector<std::size_t>& sources,
                       const std::vector<std::size_t>& cards) {
  std::size_t flat = 0;
  for (std::size_t i : sources) flat = flat * cards[i] + tuple[i];
  return flat;
}

std::size_t restricted_count(const std::vector<std::size_t>& sources,
                             const std::vector<std::size_t>& cards) {
  std::size_t n = 1;
  for (std::size_t i : sources) n *= cards[i];
  return n;
}

}  // namespace

std::size_t HiddenVariableSpec::input_count() const {
  return std::accumulate(cardinalities.begin(), cardinalities.end(), std::size_t{1},
                         std::multiplies<>());
}

std::vector<std::size_t> HiddenVariableSpec::input_tuple(std::size_t flat) const {
  std::vector<std::size_t> t(cardinalities.size());
  for (std::size_t i = cardinalities.size(); i-- > 0;) {
    t[i] = flat % cardinalities[i];
    flat /= cardinalities[i];
  }
  return t;
}

void HiddenVariableSpec::validate() const {
  if (cardinalities.empty()) throw StructuralError("hidden-variable spec has no sources");
  for (auto c : cardinalities) {
    if (c == 0) throw StructuralError("hidden-variable cardinality must be at least 1");
  }
}

HiddenVariableSpec default_hidden_spec(ScenarioKind kind, std::size_t dimension,
                                       std::size_t settings) {
  switch (kind) {
    case ScenarioKind::bipartite:
      return {{ipow(dimension, settings)}};
    case ScenarioKind::one_untrusted:
      return {{ipow(2, settings + 1)}};
    case ScenarioKind::two_untrusted:
      return {{ipow(2, 2 * settings)}};
    case ScenarioKind::bilocal:
      return {{4, 4}};
  }
  throw DomainError("default_hidden_spec: unknown scenario kind");
}

ModelShape ModelShape::make(const NetworkTopology& topology, const Dims& trusted_dims,
                            const HiddenVariableSpec& hidden) {
  topology.validate();
  hidden.validate();
  if (hidden.cardinalities.size() != topology.source_count) {
    throw StructuralError("hidden-variable spec has " + std::to_string(hidden.cardinalities.size()) +
                          " sources, topology has " + std::to_string(topology.source_count));
  }
  if (trusted_dims.size() != topology.trusted_count) {
    throw StructuralError("trusted dims do not match the trusted party count");
  }
  ModelShape s;
  s.topology = topology;
  s.trusted_dims = trusted_dims;
  s.hidden = hidden;
  const auto& cards = hidden.cardinalities;
  for (std::size_t j = 0; j < topology.untrusted_count; ++j) {
    s.untrusted_sources.push_back(topology.sources_of_untrusted(j));
    s.untrusted_lambda_count.push_back(restricted_count(s.untrusted_sources.back(), cards));
  }
  for (std::size_t k = 0; k < topology.trusted_count; ++k) {
    s.trusted_sources.push_back(topology.sources_of_trusted(k));
    s.trusted_lambda_count.push_back(restricted_count(s.trusted_sources.back(), cards));
  }
  const std::size_t n = hidden.input_count();
  s.untrusted_index.resize(n);
  s.trusted_index.resize(n);
  for (std::size_t f = 0; f < n; ++f) {
    const auto t = hidden.input_tuple(f);
    for (const auto& src : s.untrusted_sources) s.untrusted_index[f].push_back(restricted(t, src, cards));
    for (const auto& src : s.trusted_sources) s.trusted_index[f].push_back(restricted(t, src, cards));
  }
  return s;
}

std::size_t ModelShape::trusted_dimension() const {
  return std::accumulate(trusted_dims.begin(), trusted_dims.end(), std::size_t{1},
                         std::multiplies<>());
}

bool ModelShape::compatible_with(const NetworkTopology& other, const Dims& other_dims) const {
  return other.source_count == topology.source_count &&
         other.untrusted_count == topology.untrusted_count &&
         other.trusted_count == topology.trusted_count &&
         other.incidence_untrusted == topology.incidence_untrusted &&
         other.incidence_trusted == topology.incidence_trusted &&
         other.settings == topology.settings && other.outcomes == topology.outcomes &&
         other_dims == trusted_dims;
}

LocalModel LocalModel::empty(const ModelShape& shape) {
  LocalModel m;
  m.shape = shape;
  for (auto c : shape.hidden.cardinalities) m.source_distributions.emplace_back(c, 0.0);
  for (std::size_t j = 0; j < shape.topology.untrusted_count; ++j) {
    m.responses.emplace_back(
        shape.topology.settings[j] * shape.untrusted_lambda_count[j] * shape.topology.outcomes[j], 0.0);
  }
  for (std::size_t k = 0; k < shape.topology.trusted_count; ++k) {
    m.hidden_states.emplace_back(shape.trusted_lambda_count[k],
                                 ComplexMatrix(shape.trusted_dims[k], shape.trusted_dims[k]));
  }
  return m;
}

void LocalModel::validate(double tol) const {
  const auto& t = shape.topology;
  if (source_distributions.size() != t.source_count || responses.size() != t.untrusted_count ||
      hidden_states.size() != t.trusted_count) {
    throw StructuralError("local model tables do not match the topology");
  }
  for (std::size_t i = 0; i < t.source_count; ++i) {
    const auto& p = source_distributions[i];
    if (p.size() != shape.hidden.cardinalities[i]) throw StructuralError("source distribution size");
    double sum = 0.0;
    for (double v : p) {
      if (v < -tol) throw PreconditionError("negative source probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) throw PreconditionError("source distribution does not sum to 1");
  }
  for (std::size_t j = 0; j < t.untrusted_count; ++j) {
    if (responses[j].size() != t.settings[j] * shape.untrusted_lambda_count[j] * t.outcomes[j]) {
      throw StructuralError("response table size");
    }
    for (std::size_t x = 0; x < t.settings[j]; ++x) {
      for (std::size_t l = 0; l < shape.untrusted_lambda_count[j]; ++l) {
        double sum = 0.0;
        for (std::size_t a = 0; a < t.outcomes[j]; ++a) {
          const double v = response(j, a, x, l);
          if (v < -tol) throw PreconditionError("negative response probability");
          sum += v;
        }
        if (std::abs(sum - 1.0) > tol) {
          throw PreconditionError("response table of party " + std::to_string(j) +
                                  " is not normalized");
        }
      }
    }
  }
  for (std::size_t k = 0; k < t.trusted_count; ++k) {
    if (hidden_states[k].size() != shape.trusted_lambda_count[k]) {
      throw StructuralError("hidden-state bank size");
    }
    for (const auto& s : hidden_states[k]) {
      DensityOperator{s, {shape.trusted_dims[k]}}.validate(tol);
    }
  }
}

Assemblage model_assemblage(const LocalModel& model) {
  const auto& shape = model.shape;
  const auto& t = shape.topology;
  Assemblage out(t.settings, t.outcomes, shape.trusted_dims);
  const std::size_t nx = out.setting_tuple_count();
  const std::size_t na = out.outcome_tuple_count();
  std::vector<std::vector<std::size_t>> xs(nx), as(na);
  for (std::size_t x = 0; x < nx; ++x) xs[x] = out.setting_tuple(x);
  for (std::size_t a = 0; a < na; ++a) as[a] = out.outcome_tuple(a);

  for (std::size_t f = 0; f < shape.input_count(); ++f) {
    const auto lambda = shape.hidden.input_tuple(f);
    double weight = 1.0;
    for (std::size_t i = 0; i < t.source_count; ++i) weight *= model.source_distributions[i][lambda[i]];
    if (weight == 0.0) continue;
    std::vector<ComplexMatrix> factors;
    for (std::size_t k = 0; k < t.trusted_count; ++k) {
      factors.push_back(model.hidden_states[k][shape.trusted_index[f][k]]);
    }
    const ComplexMatrix state = tensor_product(std::span<const ComplexMatrix>(factors));
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t a = 0; a < na; ++a) {
        double c = weight;
        for (std::size_t j = 0; j < t.untrusted_count && c != 0.0; ++j) {
          c *= model.response(j, as[a][j], xs[x][j], shape.untrusted_index[f][j]);
        }
        if (c != 0.0) out.member(out.flat_index(a, x)).add_scaled(state, c);
      }
    }
  }
  return out;
}

Assemblage model_assemblage(const LocalModel& model, const Scenario& scenario) {
  if (!model.shape.compatible_with(scenario.topology, scenario.trusted_dims)) {
    throw StructuralError("model_assemblage: model does not match the scenario topology");
  }
  return model_assemblage(model);
}

}  // namespace netsteer
