#include "netsteer/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "netsteer/errors.hpp"

namespace netsteer {

namespace {

std::size_t block_param_size(std::size_t rows, std::size_t width,
                             const std::vector<std::size_t>& radices, std::size_t hidden) {
  if (hidden == 0) return rows * width;
  const std::size_t s = std::accumulate(radices.begin(), radices.end(), std::size_t{0});
  return hidden * s + hidden + width * hidden + width;
}

std::vector<std::size_t> digits_of(std::size_t r, const std::vector<std::size_t>& radices) {
  std::vector<std::size_t> d(radices.size());
  for (std::size_t q = radices.size(); q-- > 0;) {
    d[q] = r % radices[q];
    r /= radices[q];
  }
  return d;
}

// One-hot column index of each digit in the concatenated input.
std::vector<std::size_t> onehot_columns(std::size_t r, const std::vector<std::size_t>& radices) {
  const auto d = digits_of(r, radices);
  std::vector<std::size_t> cols(d.size());
  std::size_t off = 0;
  for (std::size_t q = 0; q < d.size(); ++q) {
    cols[q] = off + d[q];
    off += radices[q];
  }
  return cols;
}

struct HiddenView {
  std::size_t h, s, width;
  const double* base;
  const double* w1() const { return base; }
  const double* b1() const { return base + h * s; }
  const double* w2() const { return base + h * s + h; }
  const double* b2() const { return base + h * s + h + width * h; }
};

void hidden_activations(const HiddenView& v, const std::vector<std::size_t>& cols,
                        std::vector<double>& act) {
  act.assign(v.h, 0.0);
  for (std::size_t u = 0; u < v.h; ++u) {
    double pre = v.b1()[u];
    for (auto c : cols) pre += v.w1()[u * v.s + c];
    act[u] = std::tanh(pre);
  }
}

void softmax_inplace(double* z, std::size_t n) {
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) mx = std::max(mx, z[t]);
  double sum = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    z[t] = std::exp(z[t] - mx);
    sum += z[t];
  }
  for (std::size_t t = 0; t < n; ++t) z[t] /= sum;
}

Ket kron(const std::vector<const Ket*>& factors) {
  Ket out{Complex(1.0)};
  for (const Ket* f : factors) {
    Ket next(out.size() * f->size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t t = 0; t < f->size(); ++t) next[i * f->size() + t] = out[i] * (*f)[t];
    }
    out = std::move(next);
  }
  return out;
}

struct Smoothed {
  double raw = 0.0;
  double smooth = 0.0;
  ComplexMatrix grad;  // d(sum sqrt(mu^2 + eps^2)) / d(delta)
};

Smoothed smoothed_trace_norm(const ComplexMatrix& delta, double eps, bool with_gradient) {
  Smoothed out;
  const auto eig = hermitian_eig(delta);
  const std::size_t n = delta.rows();
  std::vector<double> fprime(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = eig.eigenvalues[i];
    const double r = std::sqrt(mu * mu + eps * eps);
    out.raw += std::abs(mu);
    out.smooth += r;
    fprime[i] = r > 0.0 ? mu / r : 0.0;
  }
  if (with_gradient) {
    out.grad = ComplexMatrix(n, n);
    const auto& v = eig.eigenvectors;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = r; c < n; ++c) {
        Complex acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += v(r, i) * fprime[i] * std::conj(v(c, i));
        out.grad(r, c) = acc;
        out.grad(c, r) = std::conj(acc);
      }
    }
  }
  return out;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (iterations == 0 || restarts == 0) throw DomainError("optimizer: iterations and restarts must be positive");
  if (!(learning_rate > 0.0) || !(lr_decay > 0.0 && lr_decay < 1.0) || !(min_learning_rate > 0.0)) {
    throw DomainError("optimizer: learning-rate schedule must be positive with decay in (0,1)");
  }
  if (beta_schedule.empty()) throw DomainError("optimizer: empty beta schedule");
  for (double b : beta_schedule) {
    if (!(b > 0.0)) throw DomainError("optimizer: beta values must be positive");
  }
  if (!(epsilon > 0.0) || !(epsilon_decay > 0.0) || !(tolerance > 0.0) ||
      !(residual_tolerance > 0.0) || !(init_scale > 0.0) || plateau_patience == 0) {
    throw DomainError("optimizer: smoothing, tolerances and patience must be positive");
  }
}

ParametrizedModel::ParametrizedModel(ModelShape shape, std::size_t hidden_width)
    : shape_(std::move(shape)), hidden_width_(hidden_width) {
  const auto& t = shape_.topology;
  auto add = [&](BlockKind kind, std::size_t owner, std::size_t rows, std::size_t width,
                 std::vector<std::size_t> radices) {
    ParamBlock b{kind, owner, rows, width, std::move(radices), theta_.size(), 0};
    b.size = block_param_size(rows, width, b.radices, hidden_width_);
    theta_.resize(theta_.size() + b.size, 0.0);
    blocks_.push_back(std::move(b));
  };
  for (std::size_t i = 0; i < t.source_count; ++i) {
    add(BlockKind::source, i, 1, shape_.hidden.cardinalities[i], {});
  }
  for (std::size_t j = 0; j < t.untrusted_count; ++j) {
    std::vector<std::size_t> radices{t.settings[j]};
    for (auto i : shape_.untrusted_sources[j]) radices.push_back(shape_.hidden.cardinalities[i]);
    add(BlockKind::response, j, t.settings[j] * shape_.untrusted_lambda_count[j], t.outcomes[j],
        std::move(radices));
  }
  for (std::size_t k = 0; k < t.trusted_count; ++k) {
    std::vector<std::size_t> radices;
    for (auto i : shape_.trusted_sources[k]) radices.push_back(shape_.hidden.cardinalities[i]);
    add(BlockKind::state, k, shape_.trusted_lambda_count[k], 2 * shape_.trusted_dims[k],
        std::move(radices));
  }
}

void ParametrizedModel::randomize(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  if (hidden_width_ == 0) {
    for (auto& v : theta_) v = g(rng);
    return;
  }
  const double w2_scale = 1.0 / std::sqrt(static_cast<double>(hidden_width_));
  for (const auto& b : blocks_) {
    const std::size_t s = std::accumulate(b.radices.begin(), b.radices.end(), std::size_t{0});
    double* p = theta_.data() + b.offset;
    const std::size_t h = hidden_width_;
    for (std::size_t q = 0; q < h * s + h; ++q) p[q] = g(rng);
    for (std::size_t q = 0; q < b.width * h; ++q) p[h * s + h + q] = g(rng) * w2_scale;
    for (std::size_t q = 0; q < b.width; ++q) p[h * s + h + b.width * h + q] = g(rng);
  }
}

std::vector<std::vector<double>> ParametrizedModel::raw_outputs() const {
  std::vector<std::vector<double>> raw;
  raw.reserve(blocks_.size());
  std::vector<double> act;
  for (const auto& b : blocks_) {
    std::vector<double> out(b.rows * b.width);
    if (hidden_width_ == 0) {
      std::copy_n(theta_.begin() + static_cast<std::ptrdiff_t>(b.offset), out.size(), out.begin());
    } else {
      const HiddenView v{hidden_width_,
                         std::accumulate(b.radices.begin(), b.radices.end(), std::size_t{0}),
                         b.width, theta_.data() + b.offset};
      for (std::size_t r = 0; r < b.rows; ++r) {
        hidden_activations(v, onehot_columns(r, b.radices), act);
        for (std::size_t t = 0; t < b.width; ++t) {
          double z = v.b2()[t];
          for (std::size_t u = 0; u < v.h; ++u) z += v.w2()[t * v.h + u] * act[u];
          out[r * b.width + t] = z;
        }
      }
    }
    raw.push_back(std::move(out));
  }
  return raw;
}

void ParametrizedModel::decode(const std::vector<std::vector<double>>& raw,
                               std::vector<std::vector<double>>& sources,
                               std::vector<std::vector<double>>& responses,
                               std::vector<std::vector<Ket>>& kets) const {
  const auto& t = shape_.topology;
  sources.assign(t.source_count, {});
  responses.assign(t.untrusted_count, {});
  kets.assign(t.trusted_count, {});
  for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
    const auto& b = blocks_[bi];
    std::vector<double> z = raw[bi];
    switch (b.kind) {
      case BlockKind::source:
        softmax_inplace(z.data(), b.width);
        sources[b.owner] = std::move(z);
        break;
      case BlockKind::response:
        for (std::size_t r = 0; r < b.rows; ++r) softmax_inplace(z.data() + r * b.width, b.width);
        responses[b.owner] = std::move(z);
        break;
      case BlockKind::state: {
        const std::size_t d = b.width / 2;
        auto& bank = kets[b.owner];
        bank.assign(b.rows, Ket(d));
        for (std::size_t r = 0; r < b.rows; ++r) {
          double n2 = 0.0;
          for (std::size_t q = 0; q < d; ++q) {
            bank[r][q] = Complex(z[r * b.width + 2 * q], z[r * b.width + 2 * q + 1]);
            n2 += std::norm(bank[r][q]);
          }
          const double n = std::sqrt(n2);
          if (n == 0.0) {
            bank[r][0] = 1.0;
          } else {
            for (auto& c : bank[r]) c /= n;
          }
        }
        break;
      }
    }
  }
}

LocalModel ParametrizedModel::forward() const {
  std::vector<std::vector<double>> sources, responses;
  std::vector<std::vector<Ket>> kets;
  decode(raw_outputs(), sources, responses, kets);
  LocalModel m = LocalModel::empty(shape_);
  m.source_distributions = std::move(sources);
  m.responses = std::move(responses);
  for (std::size_t k = 0; k < kets.size(); ++k) {
    for (std::size_t l = 0; l < kets[k].size(); ++l) {
      m.hidden_states[k][l] = ComplexMatrix::projector(kets[k][l]);
    }
  }
  return m;
}

std::vector<double> ParametrizedModel::backward(const std::vector<std::vector<double>>& raw,
                                                const ModelGradient& g) const {
  std::vector<double> grad(theta_.size(), 0.0);
  std::vector<double> act, dact;
  for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
    const auto& b = blocks_[bi];
    const auto& z = raw[bi];
    std::vector<double> dz(b.rows * b.width, 0.0);
    switch (b.kind) {
      case BlockKind::source:
      case BlockKind::response: {
        const auto& dp =
            b.kind == BlockKind::source ? g.source_distributions[b.owner] : g.responses[b.owner];
        std::vector<double> p(b.width);
        for (std::size_t r = 0; r < b.rows; ++r) {
          std::copy_n(z.begin() + static_cast<std::ptrdiff_t>(r * b.width), b.width, p.begin());
          softmax_inplace(p.data(), b.width);
          double dot = 0.0;
          for (std::size_t t = 0; t < b.width; ++t) dot += p[t] * dp[r * b.width + t];
          for (std::size_t t = 0; t < b.width; ++t) {
            dz[r * b.width + t] = p[t] * (dp[r * b.width + t] - dot);
          }
        }
        break;
      }
      case BlockKind::state: {
        const std::size_t d = b.width / 2;
        for (std::size_t r = 0; r < b.rows; ++r) {
          Ket u(d);
          double n2 = 0.0;
          for (std::size_t q = 0; q < d; ++q) {
            u[q] = Complex(z[r * b.width + 2 * q], z[r * b.width + 2 * q + 1]);
            n2 += std::norm(u[q]);
          }
          const double n = std::sqrt(n2);
          if (n == 0.0) continue;
          const Ket& gk = g.hidden_states[b.owner][r];
          double proj = 0.0;  // Re <psi|g>
          for (std::size_t q = 0; q < d; ++q) proj += (std::conj(u[q]) * gk[q]).real() / n;
          for (std::size_t q = 0; q < d; ++q) {
            const Complex gu = (gk[q] - u[q] / n * proj) / n;
            dz[r * b.width + 2 * q] = gu.real();
            dz[r * b.width + 2 * q + 1] = gu.imag();
          }
        }
        break;
      }
    }
    if (hidden_width_ == 0) {
      std::copy(dz.begin(), dz.end(), grad.begin() + static_cast<std::ptrdiff_t>(b.offset));
      continue;
    }
    const HiddenView v{hidden_width_,
                       std::accumulate(b.radices.begin(), b.radices.end(), std::size_t{0}),
                       b.width, theta_.data() + b.offset};
    double* gw1 = grad.data() + b.offset;
    double* gb1 = gw1 + v.h * v.s;
    double* gw2 = gb1 + v.h;
    double* gb2 = gw2 + v.width * v.h;
    for (std::size_t r = 0; r < b.rows; ++r) {
      const auto cols = onehot_columns(r, b.radices);
      hidden_activations(v, cols, act);
      dact.assign(v.h, 0.0);
      for (std::size_t t = 0; t < b.width; ++t) {
        const double d = dz[r * b.width + t];
        gb2[t] += d;
        for (std::size_t u = 0; u < v.h; ++u) {
          gw2[t * v.h + u] += d * act[u];
          dact[u] += d * v.w2()[t * v.h + u];
        }
      }
      for (std::size_t u = 0; u < v.h; ++u) {
        const double dpre = dact[u] * (1.0 - act[u] * act[u]);
        gb1[u] += dpre;
        for (auto c : cols) gw1[u * v.s + c] += dpre;
      }
    }
  }
  return grad;
}

ParametrizedModel build_parametrized_model(const Scenario& scenario,
                                           const HiddenVariableSpec& hidden,
                                           std::size_t hidden_width, std::uint64_t seed) {
  ParametrizedModel m(ModelShape::make(scenario, hidden), hidden_width);
  std::mt19937_64 rng(seed);
  m.randomize(rng, 1.0);
  return m;
}

LossFunction::LossFunction(const ParametrizedModel& model, const Assemblage& target)
    : target_(target) {
  const auto& shape = model.shape();
  if (target.settings() != shape.topology.settings || target.outcomes() != shape.topology.outcomes ||
      target.trusted_dims() != shape.trusted_dims) {
    throw StructuralError("loss: target assemblage does not match the model structure");
  }
  target_reduced_ = target.reduced_state(0);
  for (std::size_t x = 0; x < target.setting_tuple_count(); ++x) {
    setting_tuples_.push_back(target.setting_tuple(x));
  }
  for (std::size_t a = 0; a < target.outcome_tuple_count(); ++a) {
    outcome_tuples_.push_back(target.outcome_tuple(a));
  }
}

LossValue LossFunction::evaluate(const ParametrizedModel& model, double beta, double epsilon,
                                 bool with_gradient) const {
  const auto& shape = model.shape();
  const auto& topo = shape.topology;
  const auto raw = model.raw_outputs();
  std::vector<std::vector<double>> sources, responses;
  std::vector<std::vector<Ket>> kets;
  model.decode(raw, sources, responses, kets);

  const std::size_t nl = shape.input_count();
  const std::size_t nx = setting_tuples_.size();
  const std::size_t na = outcome_tuples_.size();
  const std::size_t ne = nx * na;
  const std::size_t dim = shape.trusted_dimension();
  const std::size_t nu = topo.untrusted_count;
  const std::size_t nsrc = topo.source_count;

  std::vector<double> weight(nl);
  std::vector<Ket> psi(nl);
  std::vector<double> coeff(nl * ne);
  std::vector<const Ket*> factors(topo.trusted_count);
  for (std::size_t f = 0; f < nl; ++f) {
    const auto lambda = shape.hidden.input_tuple(f);
    double w = 1.0;
    for (std::size_t i = 0; i < nsrc; ++i) w *= sources[i][lambda[i]];
    weight[f] = w;
    for (std::size_t k = 0; k < topo.trusted_count; ++k) {
      factors[k] = &kets[k][shape.trusted_index[f][k]];
    }
    psi[f] = kron(factors);
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t a = 0; a < na; ++a) {
        double c = 1.0;
        for (std::size_t j = 0; j < nu; ++j) {
          c *= responses[j][shape.response_offset(j, setting_tuples_[x][j], shape.untrusted_index[f][j]) +
                            outcome_tuples_[a][j]];
        }
        coeff[f * ne + x * na + a] = c;
      }
    }
  }

  auto add_rank_one = [dim](ComplexMatrix& m, const Ket& v, double s) {
    for (std::size_t r = 0; r < dim; ++r) {
      const Complex vr = v[r] * s;
      for (std::size_t c = 0; c < dim; ++c) m(r, c) += vr * std::conj(v[c]);
    }
  };

  LossValue out;
  const double norm_x = 1.0 / static_cast<double>(nx);
  std::vector<ComplexMatrix> grads(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    ComplexMatrix sigma(dim, dim);
    for (std::size_t f = 0; f < nl; ++f) {
      const double s = weight[f] * coeff[f * ne + e];
      if (s != 0.0) add_rank_one(sigma, psi[f], s);
    }
    sigma -= target_.member(e);
    auto sm = smoothed_trace_norm(sigma, epsilon, with_gradient);
    out.distance += 0.5 * norm_x * sm.raw;
    out.loss += 0.5 * norm_x * sm.smooth;
    if (with_gradient) grads[e] = sm.grad * (0.5 * norm_x);
  }
  ComplexMatrix reduced(dim, dim);
  for (std::size_t f = 0; f < nl; ++f) add_rank_one(reduced, psi[f], weight[f]);
  reduced -= target_reduced_;
  auto smr = smoothed_trace_norm(reduced, epsilon, with_gradient);
  out.residual = 0.5 * smr.raw;
  out.loss += beta * 0.5 * smr.smooth;
  if (!with_gradient) return out;
  const ComplexMatrix gc = smr.grad * (0.5 * beta);

  ModelGradient mg;
  for (std::size_t i = 0; i < nsrc; ++i) mg.source_distributions.emplace_back(sources[i].size(), 0.0);
  for (std::size_t j = 0; j < nu; ++j) mg.responses.emplace_back(responses[j].size(), 0.0);
  for (std::size_t k = 0; k < topo.trusted_count; ++k) {
    mg.hidden_states.emplace_back(kets[k].size(), Ket(kets[k].front().size()));
  }

  Ket y(dim), gpsi(dim);
  auto apply = [dim](const ComplexMatrix& m, const Ket& v, Ket& res) {
    for (std::size_t r = 0; r < dim; ++r) {
      Complex acc = 0.0;
      for (std::size_t c = 0; c < dim; ++c) acc += m(r, c) * v[c];
      res[r] = acc;
    }
  };
  auto re_inner = [dim](const Ket& u, const Ket& v) {
    double acc = 0.0;
    for (std::size_t r = 0; r < dim; ++r) acc += (std::conj(u[r]) * v[r]).real();
    return acc;
  };

  for (std::size_t f = 0; f < nl; ++f) {
    const double w = weight[f];
    apply(gc, psi[f], y);
    double gw = re_inner(psi[f], y);
    for (std::size_t r = 0; r < dim; ++r) gpsi[r] = y[r];
    for (std::size_t e = 0; e < ne; ++e) {
      const double c = coeff[f * ne + e];
      apply(grads[e], psi[f], y);
      const double q = re_inner(psi[f], y);
      gw += c * q;
      if (c != 0.0) {
        for (std::size_t r = 0; r < dim; ++r) gpsi[r] += c * y[r];
      }
      // response tables: d c / d R_j = prod of the other parties' responses
      const double gc_e = w * q;
      const std::size_t x = e / na;
      const std::size_t a = e % na;
      for (std::size_t j = 0; j < nu; ++j) {
        double others = 1.0;
        for (std::size_t jj = 0; jj < nu; ++jj) {
          if (jj == j) continue;
          others *= responses[jj][shape.response_offset(jj, setting_tuples_[x][jj],
                                                        shape.untrusted_index[f][jj]) +
                                  outcome_tuples_[a][jj]];
        }
        mg.responses[j][shape.response_offset(j, setting_tuples_[x][j], shape.untrusted_index[f][j]) +
                        outcome_tuples_[a][j]] += gc_e * others;
      }
    }
    const auto lambda = shape.hidden.input_tuple(f);
    for (std::size_t i = 0; i < nsrc; ++i) {
      double others = 1.0;
      for (std::size_t ii = 0; ii < nsrc; ++ii) {
        if (ii != i) others *= sources[ii][lambda[ii]];
      }
      mg.source_distributions[i][lambda[i]] += gw * others;
    }
    for (auto& v : gpsi) v *= 2.0 * w;
    // contract with the conjugate of the other factors
    const std::size_t nk = topo.trusted_count;
    for (std::size_t r = 0; r < dim; ++r) {
      std::size_t rem = r;
      std::vector<std::size_t> digit(nk);
      for (std::size_t k = nk; k-- > 0;) {
        digit[k] = rem % shape.trusted_dims[k];
        rem /= shape.trusted_dims[k];
      }
      for (std::size_t k = 0; k < nk; ++k) {
        Complex others = 1.0;
        for (std::size_t kk = 0; kk < nk; ++kk) {
          if (kk != k) others *= std::conj(kets[kk][shape.trusted_index[f][kk]][digit[kk]]);
        }
        mg.hidden_states[k][shape.trusted_index[f][k]][digit[k]] += gpsi[r] * others;
      }
    }
  }
  out.gradient = model.backward(raw, mg);
  return out;
}

LossValue loss(const ParametrizedModel& model, const Assemblage& target, double beta,
               double epsilon) {
  return LossFunction(model, target).evaluate(model, beta, epsilon);
}

SteerabilityResult optimize(const Assemblage& target, const Scenario& scenario,
                            const HiddenVariableSpec& hidden, const OptimizerConfig& config,
                            const TraceSink& trace, std::size_t trace_stride) {
  config.validate();
  scenario.validate();
  ParametrizedModel model(ModelShape::make(scenario, hidden), config.hidden_width);
  const LossFunction objective(model, target);
  const std::size_t stages = config.beta_schedule.size();
  const double merit_weight = *std::max_element(config.beta_schedule.begin(), config.beta_schedule.end());
  if (trace_stride == 0) trace_stride = 1;

  SteerabilityResult result;
  double best_merit = std::numeric_limits<double>::infinity();
  constexpr double b1 = 0.9, b2 = 0.999, adam_eps = 1e-12;

  for (std::size_t restart = 0; restart < config.restarts; ++restart) {
    std::mt19937_64 rng(config.seed * 0x9E3779B97F4A7C15ULL + restart);
    model.randomize(rng, config.init_scale);
    auto& theta = model.parameters();
    std::vector<double> m1(theta.size(), 0.0), m2(theta.size(), 0.0);
    std::size_t step = 0;
    double lr = config.learning_rate;
    double restart_best = std::numeric_limits<double>::infinity();
    double restart_value = 0.0, restart_residual = 0.0;
    std::vector<double> restart_theta;
    bool settled = false;

    for (std::size_t stage = 0; stage < stages && !settled; ++stage) {
      const double beta = config.beta_schedule[stage];
      const double eps = config.epsilon * std::pow(config.epsilon_decay, static_cast<double>(stage));
      const std::size_t budget = stage + 1 == stages
                                     ? config.iterations - (config.iterations / stages) * (stages - 1)
                                     : config.iterations / stages;
      lr = std::max(lr, config.learning_rate * 0.1);
      double stage_best = std::numeric_limits<double>::infinity();
      std::size_t since_improve = 0;

      for (std::size_t it = 0; it < budget; ++it) {
        const LossValue v = objective.evaluate(model, beta, eps);
        ++result.iterations_used;
        const double merit = v.distance + merit_weight * v.residual;
        if (merit < restart_best) {
          restart_best = merit;
          restart_value = v.distance;
          restart_residual = v.residual;
          restart_theta = theta;
        }
        if (trace && step % trace_stride == 0) {
          trace({restart, step, v.loss, v.distance, v.residual});
        }
        if (v.distance < config.tolerance && v.residual < config.tolerance) {
          settled = true;
          break;
        }
        if (v.loss < stage_best * (1.0 - 1e-6)) {
          stage_best = v.loss;
          since_improve = 0;
        } else if (++since_improve > config.plateau_patience) {
          lr *= config.lr_decay;
          since_improve = 0;
          if (lr < config.min_learning_rate) {
            if (stage + 1 == stages) settled = true;
            break;
          }
        }
        ++step;
        const double c1 = 1.0 - std::pow(b1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(b2, static_cast<double>(step));
        for (std::size_t p = 0; p < theta.size(); ++p) {
          const double gp = v.gradient[p];
          m1[p] = b1 * m1[p] + (1.0 - b1) * gp;
          m2[p] = b2 * m2[p] + (1.0 - b2) * gp * gp;
          theta[p] -= lr * (m1[p] / c1) / (std::sqrt(m2[p] / c2) + adam_eps);
        }
      }
    }
    result.restart_values.push_back(restart_value);
    if (restart_best < best_merit) {
      best_merit = restart_best;
      result.value = restart_value;
      result.residual = restart_residual;
      result.best_parameters = restart_theta;
      result.converged = settled && restart_residual <= config.residual_tolerance;
    }
    if (result.value < config.tolerance && result.residual < config.tolerance) break;
  }
  model.parameters() = result.best_parameters;
  result.best_model = model.forward();
  return result;
}

}  // namespace netsteer
