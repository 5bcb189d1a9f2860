#ifndef NETSTEER_ANALYTIC_HPP
#define NETSTEER_ANALYTIC_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "netsteer/local_model.hpp"

namespace netsteer {

// Bipartite isotropic steerability: S(v) = max{0, slope * (v - threshold)}.
struct ClosedFormEntry {
  std::size_t dimension = 0;
  std::size_t settings = 0;
  double threshold = 0.0;
  double slope = 0.0;

  double steerability(double visibility) const;
};

ClosedFormEntry table1(std::size_t d, std::size_t settings);
std::vector<ClosedFormEntry> table1_entries();

// Reference thresholds for the GHZ scenarios: one untrusted N=2,3 -> 1/3, 1/(2 sqrt2 + 1);
// two untrusted N=2,3 -> 2/3, 3/7.
double multipartite_threshold(ScenarioKind kind, std::size_t settings);

// CSV rows: scenario,d,N,threshold,slope (12 significant digits).
std::string threshold_table_csv();

// Four deterministic strategies in lexicographic order with states
// (I + r_z Z + r_x X)/2, r = min(v, 1/sqrt2); uniform weights.
LocalModel lhs_model_d2n2(double visibility);

struct XiZeta {
  double xi = 0.0;
  double zeta = 0.0;
  int branch = 0;        // 1, 2 or 3
  bool swapped = false;  // w > v was reduced to v > w first
};

XiZeta xizeta(double v, double w);

// Uniform sources over 4 values, fixed 4 x 16 response table, hidden states
// (I + s * r.sigma)/2 with s = xi on B1 and zeta on B2.
LocalModel nlhs_model_bilocal(double v, double w);
LocalModel nlhs_model_bilocal_from(double xi, double zeta);

struct ThresholdPoint {
  double v = 0.0;
  double w = 0.0;
  bool steerable = false;
};

std::vector<ThresholdPoint> bilocal_threshold_curve(
    const std::vector<std::pair<double, double>>& points);

}  // namespace netsteer

#endif  // NETSTEER_ANALYTIC_HPP
