#include "netsteer/sdp/steering.hpp"

#include <algorithm>

#include "netsteer/errors.hpp"

namespace netsteer {

DeterministicStrategySet::DeterministicStrategySet(std::vector<std::size_t> settings,
                                                   std::vector<std::size_t> outcomes,
                                                   std::size_t cap)
    : settings_(std::move(settings)), outcomes_(std::move(outcomes)) {
  if (settings_.empty() || settings_.size() != outcomes_.size()) {
    throw StructuralError("strategy set: settings and outcomes must be non-empty and aligned");
  }
  // digit list, most significant first
  std::vector<std::size_t> radix;
  for (std::size_t j = 0; j < settings_.size(); ++j) {
    if (settings_[j] == 0 || outcomes_[j] == 0) throw DomainError("strategy set: empty setting or outcome set");
    stride_ = std::max(stride_, settings_[j]);
    for (std::size_t x = 0; x < settings_[j]; ++x) {
      radix.push_back(outcomes_[j]);
      if (count_ > cap / outcomes_[j]) throw ResourceError("strategy count exceeds cap");
      count_ *= outcomes_[j];
    }
  }
  if (count_ > cap) throw ResourceError("strategy count exceeds cap");
  tables_.assign(count_, std::vector<std::size_t>(settings_.size() * stride_, 0));
  for (std::size_t l = 0; l < count_; ++l) {
    std::size_t rest = l;
    std::vector<std::size_t> digits(radix.size());
    for (std::size_t k = radix.size(); k-- > 0;) {
      digits[k] = rest % radix[k];
      rest /= radix[k];
    }
    std::size_t k = 0;
    for (std::size_t j = 0; j < settings_.size(); ++j) {
      for (std::size_t x = 0; x < settings_[j]; ++x) tables_[l][j * stride_ + x] = digits[k++];
    }
  }
}

std::size_t DeterministicStrategySet::outcome(std::size_t l, std::size_t j, std::size_t x) const {
  if (l >= count_ || j >= settings_.size() || x >= settings_[j]) {
    throw StructuralError("strategy set: index out of range");
  }
  return tables_[l][j * stride_ + x];
}

std::size_t DeterministicStrategySet::outcome_flat(std::size_t l, std::size_t setting_flat) const {
  // decode the setting tuple, party 0 most significant
  std::vector<std::size_t> x(settings_.size());
  for (std::size_t j = settings_.size(); j-- > 0;) {
    x[j] = setting_flat % settings_[j];
    setting_flat /= settings_[j];
  }
  std::size_t a = 0;
  for (std::size_t j = 0; j < settings_.size(); ++j) a = a * outcomes_[j] + outcome(l, j, x[j]);
  return a;
}

int DeterministicStrategySet::response(std::size_t l, std::size_t outcome_flat_index,
                                       std::size_t setting_flat) const {
  return outcome_flat(l, setting_flat) == outcome_flat_index ? 1 : 0;
}

DeterministicStrategySet enumerate_strategies(std::size_t settings, std::size_t outcomes,
                                              std::size_t cap) {
  return DeterministicStrategySet({settings}, {outcomes}, cap);
}

namespace {

void check_target(const Assemblage& target, ScenarioKind kind) {
  const auto& dims = target.trusted_dims();
  bool ok = false;
  switch (kind) {
    case ScenarioKind::bipartite:
      ok = target.party_count() == 1 && dims.size() == 1;
      break;
    case ScenarioKind::one_untrusted:
      ok = target.party_count() == 1 && dims.size() == 2 && dims[0] == 2;
      break;
    case ScenarioKind::two_untrusted:
      ok = target.party_count() == 2 && dims.size() == 1;
      break;
    case ScenarioKind::bilocal:
      throw PreconditionError("steering SDPs do not cover the bilocal network");
  }
  if (!ok) throw PreconditionError("target structure does not match the scenario kind");
  target.validate(kOptimizerTolerance);
}

ComplexMatrix mean_reduced_state(const Assemblage& target) {
  ComplexMatrix rho(target.trusted_dimension(), target.trusted_dimension());
  for (std::size_t x = 0; x < target.setting_tuple_count(); ++x) rho = rho + target.reduced_state(x);
  return rho * (1.0 / static_cast<double>(target.setting_tuple_count()));
}

// sigma_l blocks, plus their PT-PSD copies for the 1-UNT kind.
void add_strategy_blocks(SteeringSdp& s, const Assemblage& target) {
  const std::size_t dim = target.trusted_dimension();
  const Dims dims = target.trusted_dims();
  for (std::size_t l = 0; l < s.strategies.size(); ++l) {
    s.sigma_blocks.push_back(s.problem.add_psd(dim, "sigma" + std::to_string(l)));
  }
  if (s.kind != ScenarioKind::one_untrusted) return;
  for (std::size_t l = 0; l < s.strategies.size(); ++l) {
    const std::size_t t = s.problem.add_psd(dim, "sigma_pt" + std::to_string(l));
    s.transpose_blocks.push_back(t);
    s.problem.add_linear_map_equality(t, s.sigma_blocks[l], [&](const ComplexMatrix& m) {
      return partial_transpose(m, dims, 0);
    });
  }
}

std::vector<SdpProblem::MatrixTerm> strategy_terms(const SteeringSdp& s, std::size_t a,
                                                   std::size_t x, double coefficient) {
  std::vector<SdpProblem::MatrixTerm> terms;
  for (std::size_t l = 0; l < s.strategies.size(); ++l) {
    if (s.strategies.outcome_flat(l, x) == a) terms.push_back({s.sigma_blocks[l], coefficient});
  }
  return terms;
}

}  // namespace

SteeringSdp build_lower_bound_sdp(const Assemblage& target, ScenarioKind kind, std::size_t cap) {
  check_target(target, kind);
  SteeringSdp s{kind, DeterministicStrategySet(target.settings(), target.outcomes(), cap), {}, {}, {}, 0, {}, {}, 0};
  const std::size_t dim = target.trusted_dimension();
  const ComplexMatrix id = ComplexMatrix::identity(dim);
  add_strategy_blocks(s, target);
  s.eta_block = s.problem.add_nonnegative(target.member_count(), "eta");
  double settings_product = 1.0;
  for (auto n : target.settings()) settings_product *= static_cast<double>(n);

  for (std::size_t x = 0; x < target.setting_tuple_count(); ++x) {
    for (std::size_t a = 0; a < target.outcome_tuple_count(); ++a) {
      const std::size_t e = target.flat_index(a, x);
      const std::size_t eta = s.problem.scalar(s.eta_block, e);
      const std::size_t plus = s.problem.add_psd(dim, "slack_plus" + std::to_string(e));
      const std::size_t minus = s.problem.add_psd(dim, "slack_minus" + std::to_string(e));
      s.slack_blocks.push_back(plus);
      s.slack_blocks.push_back(minus);
      // eta I - (sigma_e - sum D sigma_l) = S+
      auto terms = strategy_terms(s, a, x, -1.0);
      terms.push_back({plus, 1.0});
      s.problem.add_matrix_equality(terms, {{eta, id * -1.0}}, target.member(e) * -1.0);
      // eta I + (sigma_e - sum D sigma_l) = S-
      terms = strategy_terms(s, a, x, 1.0);
      terms.push_back({minus, 1.0});
      s.problem.add_matrix_equality(terms, {{eta, id * -1.0}}, target.member(e));
      s.problem.set_objective(eta, 1.0 / (2.0 * settings_product));
    }
  }
  std::vector<SdpProblem::MatrixTerm> all;
  for (auto b : s.sigma_blocks) all.push_back({b, 1.0});
  s.problem.add_matrix_equality(all, {}, mean_reduced_state(target));
  return s;
}

SteeringSdp build_robustness_sdp(const Assemblage& target, ScenarioKind kind, std::size_t cap) {
  check_target(target, kind);
  SteeringSdp s{kind, DeterministicStrategySet(target.settings(), target.outcomes(), cap), {}, {}, {}, 0, {}, {}, 0};
  const std::size_t dim = target.trusted_dimension();
  add_strategy_blocks(s, target);
  s.r_block = s.problem.add_nonnegative(1, "r");
  const std::size_t r = s.problem.scalar(s.r_block);
  s.problem.set_objective(r, 1.0);
  for (std::size_t x = 0; x < target.setting_tuple_count(); ++x) {
    for (std::size_t a = 0; a < target.outcome_tuple_count(); ++a) {
      const std::size_t e = target.flat_index(a, x);
      const std::size_t pi = s.problem.add_psd(dim, "noise" + std::to_string(e));
      s.noise_blocks.push_back(pi);
      // sigma_e + r pi_e = sum D (1+r) sigma_l
      auto terms = strategy_terms(s, a, x, 1.0);
      terms.push_back({pi, -1.0});
      s.problem.add_matrix_equality(terms, {}, target.member(e));
    }
  }
  // sum_l (1+r) sigma_l = (1+r) rho, which fixes sum_a r pi_{a|x} = r rho for every x
  const ComplexMatrix rho = mean_reduced_state(target);
  std::vector<SdpProblem::MatrixTerm> all;
  for (auto b : s.sigma_blocks) all.push_back({b, 1.0});
  s.problem.add_matrix_equality(all, {{r, rho * -1.0}}, rho);
  return s;
}

BoundResult lower_bound(const Assemblage& target, ScenarioKind kind, const SolverSettings& settings,
                        const SolverWarmStart* warm) {
  const auto s = build_lower_bound_sdp(target, kind);
  BoundResult out;
  out.solution = solve_sdp(s.problem, settings, warm);
  out.value = std::max(out.solution.objective, 0.0);
  out.verified = out.solution.converged();
  return out;
}

RobustnessResult robustness(const Assemblage& target, ScenarioKind kind, const SolverSettings& settings) {
  const auto s = build_robustness_sdp(target, kind);
  RobustnessResult out;
  out.solution = solve_sdp(s.problem, settings);
  out.verified = out.solution.converged();
  out.r = std::max(out.solution.scalar(s.problem, s.r_block), 0.0);
  out.noise = Assemblage(target.settings(), target.outcomes(), target.trusted_dims());
  out.smeared = out.noise;
  const ComplexMatrix rho = mean_reduced_state(target);
  for (std::size_t e = 0; e < target.member_count(); ++e) {
    const ComplexMatrix scaled = psd_project(out.solution.matrix(s.problem, s.noise_blocks[e]));
    out.noise.member(e) = out.r > 1e-12 ? scaled * (1.0 / out.r)
                                        : rho * (1.0 / static_cast<double>(target.outcome_tuple_count()));
    out.smeared.member(e) = (target.member(e) + scaled) * (1.0 / (1.0 + out.r));
  }
  return out;
}

double upper_bound(const Assemblage& target, const RobustnessResult& robustness) {
  return assemblage_distance(target, robustness.smeared);
}

UpperBoundResult upper_bound(const Assemblage& target, ScenarioKind kind, const SolverSettings& settings) {
  UpperBoundResult out;
  out.robustness = robustness(target, kind, settings);
  out.verified = out.robustness.verified;
  out.value = upper_bound(target, out.robustness);
  return out;
}

}  // namespace netsteer
