#include "netsteer/analytic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "netsteer/errors.hpp"

namespace netsteer {

namespace {

constexpr double kThird = 1.0 / 3.0;

// rows: outcome (Phi+, Phi-, Psi+, Psi-); columns: (l1, l2) with l2 fastest
constexpr int kBilocalResponse[4][16] = {
    {0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0},
    {0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0},
    {1, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0},
    {0, 1, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1},
};

// Bloch directions (x, y, z) of the hidden states.
constexpr int kB1Directions[4][3] = {{1, 1, -1}, {1, -1, 1}, {-1, -1, -1}, {-1, 1, 1}};
constexpr int kB2Directions[4][3] = {{1, 1, 1}, {-1, -1, 1}, {-1, 1, -1}, {1, -1, -1}};

ComplexMatrix qubit_state(double rx, double ry, double rz) {
  return ComplexMatrix(2, 2,
                       {Complex(0.5 + rz / 2, 0.0), Complex(rx / 2, -ry / 2),
                        Complex(rx / 2, ry / 2), Complex(0.5 - rz / 2, 0.0)});
}

void check_visibility(double v, const char* who) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(who) + ": visibility outside [0, 1]");
}

}  // namespace

double ClosedFormEntry::steerability(double visibility) const {
  return std::max(0.0, slope * (visibility - threshold));
}

ClosedFormEntry table1(std::size_t d, std::size_t settings) {
  const double s3 = std::sqrt(3.0), s5 = std::sqrt(5.0);
  double t = 0.0;
  if (settings == 2) {
    switch (d) {
      case 2: t = 1.0 / std::sqrt(2.0); break;
      case 3: t = (1.0 + s3) / 4.0; break;
      case 4: t = 2.0 / 3.0; break;
      case 5: t = (3.0 + s5) / 8.0; break;
      default: throw DomainError("table1: dimension must be 2..5");
    }
  } else if (settings == 3) {
    switch (d) {
      case 2: t = 1.0 / s3; break;
      case 3: t = std::cos(std::numbers::pi / 18.0) / s3; break;
      case 4: t = 5.0 / 9.0; break;
      case 5: t = (1.0 + s5) / 6.0; break;
      default: throw DomainError("table1: dimension must be 2..5");
    }
  } else {
    throw DomainError("table1: settings must be 2 or 3");
  }
  return {d, settings, t, static_cast<double>(d - 1) / static_cast<double>(d)};
}

std::vector<ClosedFormEntry> table1_entries() {
  std::vector<ClosedFormEntry> out;
  for (std::size_t n : {2, 3}) {
    for (std::size_t d = 2; d <= 5; ++d) out.push_back(table1(d, n));
  }
  return out;
}

double multipartite_threshold(ScenarioKind kind, std::size_t settings) {
  if (kind == ScenarioKind::one_untrusted) {
    if (settings == 2) return kThird;
    if (settings == 3) return 1.0 / (2.0 * std::sqrt(2.0) + 1.0);
  } else if (kind == ScenarioKind::two_untrusted) {
    if (settings == 2) return 2.0 / 3.0;
    if (settings == 3) return 3.0 / 7.0;
  }
  throw DomainError("multipartite_threshold: unsupported scenario/settings");
}

std::string threshold_table_csv() {
  std::string out = "scenario,d,N,threshold,slope\n";
  char line[128];
  for (const auto& e : table1_entries()) {
    std::snprintf(line, sizeof line, "bipartite,%zu,%zu,%.12g,%.12g\n", e.dimension, e.settings,
                  e.threshold, e.slope);
    out += line;
  }
  for (auto kind : {ScenarioKind::one_untrusted, ScenarioKind::two_untrusted}) {
    for (std::size_t n : {2, 3}) {
      std::snprintf(line, sizeof line, "%s,2,%zu,%.12g,\n", to_string(kind).c_str(), n,
                    multipartite_threshold(kind, n));
      out += line;
    }
  }
  std::snprintf(line, sizeof line, "bilocal,2,1,%.12g,\n", kThird);
  out += line;
  return out;
}

LocalModel lhs_model_d2n2(double visibility) {
  check_visibility(visibility, "lhs_model_d2n2");
  const double r = std::min(visibility, 1.0 / std::sqrt(2.0));
  const auto scenario = bipartite_scenario(2, 2, visibility);
  LocalModel m = LocalModel::empty(ModelShape::make(scenario, {{4}}));
  m.source_distributions[0].assign(4, 0.25);
  for (std::size_t l = 0; l < 4; ++l) {
    const std::size_t a_z = l / 2, a_x = l % 2;
    m.response(0, a_z, 0, l) = 1.0;
    m.response(0, a_x, 1, l) = 1.0;
    const double sz = a_z == 0 ? r : -r;
    const double sx = a_x == 0 ? r : -r;
    m.hidden_states[0][l] = qubit_state(sx, 0.0, sz);
  }
  return m;
}

XiZeta xizeta(double v, double w) {
  check_visibility(v, "xizeta");
  check_visibility(w, "xizeta");
  if (v * w > kThird + 1e-15) throw DomainError("xizeta: v*w exceeds 1/3, outside the NLHS region");
  XiZeta out;
  if (w > v) {
    std::swap(v, w);
    out.swapped = true;
  }
  const double inv_s3 = 1.0 / std::sqrt(3.0);
  if (v <= inv_s3) {
    out.branch = 1;
    out.xi = v;
    out.zeta = w;
  } else if (w <= kThird) {
    out.branch = 2;
    out.xi = std::sqrt(v * v * w);
    out.zeta = std::sqrt(w);
  } else {
    out.branch = 3;
    out.xi = out.zeta = std::sqrt(v * w);
  }
  return out;
}

LocalModel nlhs_model_bilocal_from(double xi, double zeta) {
  LocalModel m = LocalModel::empty(ModelShape::make(bilocal_scenario(0.0, 0.0), {{4, 4}}));
  m.source_distributions[0].assign(4, 0.25);
  m.source_distributions[1].assign(4, 0.25);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t l = 0; l < 16; ++l) m.response(0, a, 0, l) = kBilocalResponse[a][l];
  }
  for (std::size_t l = 0; l < 4; ++l) {
    const auto* b1 = kB1Directions[l];
    const auto* b2 = kB2Directions[l];
    m.hidden_states[0][l] = qubit_state(xi * b1[0], xi * b1[1], xi * b1[2]);
    m.hidden_states[1][l] = qubit_state(zeta * b2[0], zeta * b2[1], zeta * b2[2]);
  }
  return m;
}

LocalModel nlhs_model_bilocal(double v, double w) {
  const auto xz = xizeta(v, w);
  return nlhs_model_bilocal_from(xz.xi, xz.zeta);
}

std::vector<ThresholdPoint> bilocal_threshold_curve(
    const std::vector<std::pair<double, double>>& points) {
  std::vector<ThresholdPoint> out;
  out.reserve(points.size());
  for (const auto& [v, w] : points) {
    check_visibility(v, "bilocal_threshold_curve");
    check_visibility(w, "bilocal_threshold_curve");
    out.push_back({v, w, v * w > kThird});
  }
  return out;
}

}  // namespace netsteer
