#ifndef NETSTEER_TESTS_SUPPORT_HPP
#define NETSTEER_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "netsteer/optimizer.hpp"

namespace netsteer::test_support {

struct GradientCheck {
  double worst_relative = 0.0;
  std::size_t coordinates = 0;
};

// Central differences on `count` random coordinates of theta.
inline GradientCheck check_gradient(ParametrizedModel& model, const Assemblage& target, double beta,
                                    double epsilon, std::size_t count, std::mt19937_64& rng,
                                    double step = 1e-6) {
  const LossFunction f(model, target);
  const auto base = f.evaluate(model, beta, epsilon);
  auto& theta = model.parameters();
  std::uniform_int_distribution<std::size_t> pick(0, theta.size() - 1);
  GradientCheck out;
  for (std::size_t n = 0; n < count; ++n) {
    const std::size_t p = pick(rng);
    const double keep = theta[p];
    theta[p] = keep + step;
    const double up = f.evaluate(model, beta, epsilon, false).loss;
    theta[p] = keep - step;
    const double down = f.evaluate(model, beta, epsilon, false).loss;
    theta[p] = keep;
    const double fd = (up - down) / (2.0 * step);
    const double an = base.gradient[p];
    const double scale = std::max({std::abs(fd), std::abs(an), 1e-3});
    out.worst_relative = std::max(out.worst_relative, std::abs(fd - an) / scale);
    ++out.coordinates;
  }
  return out;
}

}  // namespace netsteer::test_support

#endif  // NETSTEER_TESTS_SUPPORT_HPP
