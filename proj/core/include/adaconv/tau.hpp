#pragma once

#include <cstdint>
#include <vector>

#include "adaconv/rng.hpp"

namespace adaconv {

// Non-uniform law of the reported iterate index: P(tau = j) proportional to
// 1 - beta1^(N-j) over j in {0..N-1}. Uniform when beta1 = 0.
struct TauDistribution {
  std::int64_t n;
  double beta1;
  std::vector<double> weights;     // normalized, non-increasing in j
  std::vector<double> cumulative;  // prefix sums of weights
  double normalizer;               // sum of 1 - beta1^(N-j)
};

TauDistribution tau_weights(std::int64_t n, double beta1);

std::int64_t sample_tau(const TauDistribution& dist, RngStream& rng);

// Closed-form normalizer N - beta1 (1 - beta1^N) / (1 - beta1), computed
// stably for beta1 near 1.
double tau_normalizer(std::int64_t n, double beta1);

struct EffectiveHorizon {
  double value;  // N - beta1 / (1 - beta1)
  bool valid;    // N > beta1 / (1 - beta1)
};

EffectiveHorizon effective_n(std::int64_t n, double beta1);

}  // namespace adaconv
