#include "netsteer/scenario.hpp"

#include <numeric>
#include <string>

#include "netsteer/errors.hpp"

namespace netsteer {

namespace {

std::size_t product(const std::vector<std::size_t>& v) {
  return std::accumulate(v.begin(), v.end(), std::size_t{1}, std::multiplies<>());
}

void require_binary_matrix(const std::vector<std::vector<int>>& m, std::size_t rows,
                           std::size_t cols, const char* name) {
  if (m.size() != rows) throw StructuralError(std::string(name) + ": wrong number of rows");
  for (const auto& row : m) {
    if (row.size() != cols) throw StructuralError(std::string(name) + ": wrong number of columns");
    for (int v : row) {
      if (v != 0 && v != 1) throw StructuralError(std::string(name) + ": entries must be 0 or 1");
    }
  }
}

// Per-party subsystem dimensions in canonical (source-order) layout.
struct Layout {
  Dims dims;                      // all factors, sources in order
  std::vector<std::size_t> perm;  // untrusted parties first, then trusted
  std::vector<std::size_t> untrusted_dim;
  std::vector<std::size_t> trusted_dim;
};

Layout layout_of(const Scenario& s) {
  Layout layout;
  std::vector<PartySlot> tags;
  for (const auto& src : s.sources) {
    for (std::size_t f = 0; f < src.slots.size(); ++f) {
      layout.dims.push_back(src.state.dims[f]);
      tags.push_back(src.slots[f]);
    }
  }
  const auto& topo = s.topology;
  layout.untrusted_dim.assign(topo.untrusted_count, 1);
  layout.trusted_dim.assign(topo.trusted_count, 1);
  for (std::size_t j = 0; j < topo.untrusted_count; ++j) {
    for (std::size_t f = 0; f < tags.size(); ++f) {
      if (tags[f].kind == PartyKind::untrusted && tags[f].party == j) {
        layout.perm.push_back(f);
        layout.untrusted_dim[j] *= layout.dims[f];
      }
    }
  }
  for (std::size_t k = 0; k < topo.trusted_count; ++k) {
    for (std::size_t f = 0; f < tags.size(); ++f) {
      if (tags[f].kind == PartyKind::trusted && tags[f].party == k) {
        layout.perm.push_back(f);
        layout.trusted_dim[k] *= layout.dims[f];
      }
    }
  }
  return layout;
}

Scenario single_source_scenario(const DensityOperator& state, std::vector<PartySlot> slots,
                                std::size_t untrusted, std::size_t trusted,
                                std::size_t settings, const Basis* bases_begin,
                                std::size_t outcomes) {
  Scenario s;
  auto& t = s.topology;
  t.source_count = 1;
  t.untrusted_count = untrusted;
  t.trusted_count = trusted;
  t.incidence_untrusted = {std::vector<int>(untrusted, 1)};
  t.incidence_trusted = {std::vector<int>(trusted, 1)};
  t.settings.assign(untrusted, settings);
  t.outcomes.assign(untrusted, outcomes);
  s.sources.push_back(SourceState{state, std::move(slots)});
  for (std::size_t j = 0; j < untrusted; ++j) {
    std::vector<Povm> povms;
    for (std::size_t x = 0; x < settings; ++x) povms.push_back(projective_povm(bases_begin[x]));
    s.measurements.push_back(std::move(povms));
  }
  return s;
}

}  // namespace

void NetworkTopology::validate() const {
  require_binary_matrix(incidence_untrusted, source_count, untrusted_count, "incidence_untrusted");
  require_binary_matrix(incidence_trusted, source_count, trusted_count, "incidence_trusted");
  if (settings.size() != untrusted_count || outcomes.size() != untrusted_count) {
    throw StructuralError("topology: settings/outcomes must be given per untrusted party");
  }
  for (std::size_t j = 0; j < untrusted_count; ++j) {
    if (settings[j] == 0 || outcomes[j] == 0) {
      throw StructuralError("topology: settings and outcomes must be positive");
    }
  }
  for (std::size_t i = 0; i < source_count; ++i) {
    const int to_trusted = std::accumulate(incidence_trusted[i].begin(), incidence_trusted[i].end(), 0);
    const int to_untrusted =
        std::accumulate(incidence_untrusted[i].begin(), incidence_untrusted[i].end(), 0);
    if (to_trusted != 0 && to_untrusted == 0) {
      throw StructuralError("topology: source " + std::to_string(i) +
                            " feeds trusted parties but no untrusted party");
    }
  }
}

std::vector<std::size_t> NetworkTopology::sources_of_untrusted(std::size_t j) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < source_count; ++i) {
    if (incidence_untrusted[i][j] == 1) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> NetworkTopology::sources_of_trusted(std::size_t k) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < source_count; ++i) {
    if (incidence_trusted[i][k] == 1) out.push_back(i);
  }
  return out;
}

std::size_t NetworkTopology::setting_tuple_count() const { return product(settings); }
std::size_t NetworkTopology::outcome_tuple_count() const { return product(outcomes); }

void Scenario::validate() const {
  topology.validate();
  if (sources.size() != topology.source_count) {
    throw StructuralError("scenario: one state per source is required");
  }
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const auto& src = sources[i];
    src.state.validate();
    if (src.slots.size() != src.state.dims.size()) {
      throw StructuralError("scenario: source " + std::to_string(i) +
                            " needs one party slot per subsystem");
    }
    std::vector<int> hits_u(topology.untrusted_count, 0);
    std::vector<int> hits_t(topology.trusted_count, 0);
    for (const auto& slot : src.slots) {
      if (slot.kind == PartyKind::untrusted) {
        if (slot.party >= topology.untrusted_count) throw StructuralError("scenario: bad party");
        hits_u[slot.party] = 1;
      } else {
        if (slot.party >= topology.trusted_count) throw StructuralError("scenario: bad party");
        hits_t[slot.party] = 1;
      }
    }
    if (hits_u != topology.incidence_untrusted[i] || hits_t != topology.incidence_trusted[i]) {
      throw StructuralError("scenario: source " + std::to_string(i) +
                            " subsystems disagree with the incidence matrices");
    }
  }
  const Layout layout = layout_of(*this);
  if (measurements.size() != topology.untrusted_count) {
    throw StructuralError("scenario: measurements must be given per untrusted party");
  }
  for (std::size_t j = 0; j < topology.untrusted_count; ++j) {
    if (measurements[j].size() != topology.settings[j]) {
      throw StructuralError("scenario: POVM count differs from N_j for party " + std::to_string(j));
    }
    for (const auto& povm : measurements[j]) {
      povm.validate();
      if (povm.outcome_count() != topology.outcomes[j]) {
        throw StructuralError("scenario: POVM outcome count differs from O_j");
      }
      if (povm.dimension() != layout.untrusted_dim[j]) {
        throw StructuralError("scenario: POVM dimension does not match the party's subsystems");
      }
    }
  }
  if (trusted_dims != layout.trusted_dim) {
    throw StructuralError("scenario: trusted_dims disagree with the source subsystems");
  }
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::bipartite: return "bipartite";
    case ScenarioKind::one_untrusted: return "one-untrusted";
    case ScenarioKind::two_untrusted: return "two-untrusted";
    case ScenarioKind::bilocal: return "bilocal";
  }
  return "unknown";
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
  if (name == "bipartite") return ScenarioKind::bipartite;
  if (name == "one-untrusted" || name == "1-unt") return ScenarioKind::one_untrusted;
  if (name == "two-untrusted" || name == "2-unt") return ScenarioKind::two_untrusted;
  if (name == "bilocal") return ScenarioKind::bilocal;
  throw DomainError("unknown scenario kind '" + name + "'");
}

Scenario bipartite_scenario(std::size_t d, std::size_t settings, double visibility) {
  const auto family = mub_family(d, settings);
  Scenario s = single_source_scenario(
      isotropic_state(d, visibility),
      {PartySlot{PartyKind::untrusted, 0}, PartySlot{PartyKind::trusted, 0}}, 1, 1, settings,
      family.bases.data(), d);
  s.trusted_dims = {d};
  return s;
}

Scenario ghz_one_untrusted_scenario(std::size_t settings, double visibility) {
  if (settings == 0 || settings > 3) throw DomainError("GHZ scenarios support 1..3 settings");
  const auto family = mub_family(2, 3);
  Scenario s = single_source_scenario(
      noisy_ghz(visibility),
      {PartySlot{PartyKind::untrusted, 0}, PartySlot{PartyKind::trusted, 0},
       PartySlot{PartyKind::trusted, 1}},
      1, 2, settings, family.bases.data(), 2);
  s.trusted_dims = {2, 2};
  return s;
}

Scenario ghz_two_untrusted_scenario(std::size_t settings, double visibility) {
  if (settings == 0 || settings > 3) throw DomainError("GHZ scenarios support 1..3 settings");
  const auto family = mub_family(2, 3);
  Scenario s = single_source_scenario(
      noisy_ghz(visibility),
      {PartySlot{PartyKind::untrusted, 0}, PartySlot{PartyKind::untrusted, 1},
       PartySlot{PartyKind::trusted, 0}},
      2, 1, settings, family.bases.data(), 2);
  s.trusted_dims = {2};
  return s;
}

Scenario bilocal_scenario(double v, double w) {
  Scenario s;
  auto& t = s.topology;
  t.source_count = 2;
  t.untrusted_count = 1;
  t.trusted_count = 2;
  t.incidence_untrusted = {{1}, {1}};
  t.incidence_trusted = {{1, 0}, {0, 1}};
  t.settings = {1};
  t.outcomes = {4};
  s.sources.push_back(SourceState{
      isotropic_state(2, v), {PartySlot{PartyKind::trusted, 0}, PartySlot{PartyKind::untrusted, 0}}});
  s.sources.push_back(SourceState{
      isotropic_state(2, w), {PartySlot{PartyKind::untrusted, 0}, PartySlot{PartyKind::trusted, 1}}});
  s.measurements = {{bell_state_measurement()}};
  s.trusted_dims = {2, 2};
  return s;
}

Assemblage compute_assemblage(const Scenario& scenario) {
  scenario.validate();
  const Layout layout = layout_of(scenario);
  std::vector<ComplexMatrix> states;
  for (const auto& src : scenario.sources) states.push_back(src.state.matrix);
  const ComplexMatrix joint =
      permute_subsystems(tensor_product(std::span<const ComplexMatrix>(states)), layout.dims,
                         layout.perm);

  const auto& topo = scenario.topology;
  Assemblage out(topo.settings, topo.outcomes, scenario.trusted_dims);
  const std::size_t dim_a = product(layout.untrusted_dim);
  const std::size_t dim_b = product(layout.trusted_dim);

  for (std::size_t x = 0; x < out.setting_tuple_count(); ++x) {
    const auto xs = out.setting_tuple(x);
    for (std::size_t a = 0; a < out.outcome_tuple_count(); ++a) {
      const auto as = out.outcome_tuple(a);
      std::vector<ComplexMatrix> factors;
      for (std::size_t j = 0; j < topo.untrusted_count; ++j) {
        factors.push_back(scenario.measurements[j][xs[j]].elements[as[j]]);
      }
      const ComplexMatrix m = tensor_product(std::span<const ComplexMatrix>(factors));
      // sigma[b, b'] = sum_{alpha, alpha'} M[alpha', alpha] rho[(alpha, b), (alpha', b')]
      ComplexMatrix sigma(dim_b, dim_b);
      for (std::size_t al = 0; al < dim_a; ++al) {
        for (std::size_t alp = 0; alp < dim_a; ++alp) {
          const Complex coeff = m(alp, al);
          if (coeff == Complex(0.0)) continue;
          for (std::size_t b = 0; b < dim_b; ++b) {
            for (std::size_t bp = 0; bp < dim_b; ++bp) {
              sigma(b, bp) += coeff * joint(al * dim_b + b, alp * dim_b + bp);
            }
          }
        }
      }
      out.member(out.flat_index(a, x)) = std::move(sigma);
    }
  }
  return out;
}

Assemblage bilocal_assemblage(double v, double w) {
  if (!(v >= 0.0 && v <= 1.0) || !(w >= 0.0 && w <= 1.0)) {
    throw DomainError("bilocal_assemblage: visibilities must lie in [0, 1]");
  }
  const double vw = v * w;
  std::vector<ComplexMatrix> members;
  for (const auto& bell : bell_states()) {
    ComplexMatrix m = ComplexMatrix::projector(bell) * (vw / 4.0);
    m.add_scaled(ComplexMatrix::identity(4), (1.0 - vw) / 16.0);
    members.push_back(std::move(m));
  }
  return Assemblage({1}, {4}, {2, 2}, std::move(members));
}

}  // namespace netsteer
