#include "adaconv/tau.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adaconv {

double tau_normalizer(std::int64_t n, double beta1) {
  if (beta1 == 0.0) return static_cast<double>(n);
  // (1 - beta1^N) / (1 - beta1) via expm1 for beta1 near 1.
  const double geom =
      -std::expm1(static_cast<double>(n) * std::log(beta1)) / (1.0 - beta1);
  return static_cast<double>(n) - beta1 * geom;
}

TauDistribution tau_weights(std::int64_t n, double beta1) {
  if (n < 1) throw std::invalid_argument("horizon N must be >= 1");
  if (!(beta1 >= 0.0) || !(beta1 < 1.0)) {
    throw std::invalid_argument("beta1 must lie in [0, 1)");
  }
  TauDistribution dist;
  dist.n = n;
  dist.beta1 = beta1;
  dist.weights.resize(n);
  dist.cumulative.resize(n);
  dist.normalizer = tau_normalizer(n, beta1);

  if (beta1 == 0.0) {
    const double w = 1.0 / static_cast<double>(n);
    std::fill(dist.weights.begin(), dist.weights.end(), w);
  } else {
    const double log_b = std::log(beta1);
    double sum = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
      dist.weights[j] = -std::expm1(static_cast<double>(n - j) * log_b);
      sum += dist.weights[j];
    }
    for (auto& w : dist.weights) w /= sum;
  }
  double c = 0.0;
  for (std::int64_t j = 0; j < n; ++j) {
    c += dist.weights[j];
    dist.cumulative[j] = c;
  }
  dist.cumulative.back() = 1.0;
  return dist;
}

std::int64_t sample_tau(const TauDistribution& dist, RngStream& rng) {
  const double u = rng.next_double();
  const auto it =
      std::upper_bound(dist.cumulative.begin(), dist.cumulative.end(), u);
  return std::min<std::int64_t>(it - dist.cumulative.begin(), dist.n - 1);
}

EffectiveHorizon effective_n(std::int64_t n, double beta1) {
  const double drag = beta1 / (1.0 - beta1);
  return {static_cast<double>(n) - drag, static_cast<double>(n) > drag};
}

}  // namespace adaconv
