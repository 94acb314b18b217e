#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "adaconv/rng.hpp"
#include "adaconv/tau.hpp"

using namespace adaconv;

TEST_CASE("tau weights on a worked example") {
  // N = 3, beta1 = 0.5: raw weights 1 - 0.5^{3-j} = 7/8, 3/4, 1/2.
  const auto dist = tau_weights(3, 0.5);
  CHECK(dist.weights.size() == 3);
  CHECK(dist.weights[0] == doctest::Approx(7.0 / 17.0).epsilon(1e-15));
  CHECK(dist.weights[1] == doctest::Approx(6.0 / 17.0).epsilon(1e-15));
  CHECK(dist.weights[2] == doctest::Approx(4.0 / 17.0).epsilon(1e-15));
  CHECK(dist.normalizer == doctest::Approx(2.125).epsilon(1e-15));
  CHECK(dist.cumulative.back() == 1.0);
}

TEST_CASE("tau weights are uniform without momentum") {
  const auto dist = tau_weights(10, 0.0);
  for (double w : dist.weights) CHECK(w == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(dist.normalizer == doctest::Approx(10.0));
}

TEST_CASE("tau weights are normalized and non-increasing") {
  for (double b1 : {0.0, 0.3, 0.9, 0.999}) {
    const auto dist = tau_weights(200, b1);
    double sum = 0.0;
    for (std::size_t j = 0; j < dist.weights.size(); ++j) {
      sum += dist.weights[j];
      if (j > 0) CHECK(dist.weights[j] <= dist.weights[j - 1] + 1e-15);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("closed-form normalizer") {
  CHECK(tau_normalizer(100, 0.99) ==
        doctest::Approx(37.237201786049720988).epsilon(1e-13));
  // Stable near beta1 = 1.
  const double b = 1.0 - 1e-12;
  const double brute = [&] {
    double s = 0.0;
    for (int j = 0; j < 50; ++j) s += 1.0 - std::pow(b, 50 - j);
    return s;
  }();
  CHECK(tau_normalizer(50, b) == doctest::Approx(brute).epsilon(1e-6));
}

TEST_CASE("effective horizon") {
  const auto ok = effective_n(1000, 0.9);
  CHECK(ok.value == doctest::Approx(991.0));
  CHECK(ok.valid);
  const auto bad = effective_n(8, 0.9);
  CHECK(bad.value == doctest::Approx(-1.0));
  CHECK_FALSE(bad.valid);
  // Boundary: N > beta1/(1-beta1) strictly; drag = 9 < N = 10.
  CHECK(effective_n(10, 0.9).valid == true);
}

TEST_CASE("sampler matches the weights in total variation") {
  struct Case {
    std::int64_t n;
    double beta1;
  };
  for (const Case c : {Case{10, 0.0}, Case{10, 0.9}, Case{100, 0.99}}) {
    const auto dist = tau_weights(c.n, c.beta1);
    RngStream rng(derive_seed(99, static_cast<std::uint64_t>(c.n)));
    std::vector<double> counts(c.n, 0.0);
    const int draws = 1'000'000;
    for (int t = 0; t < draws; ++t) counts[sample_tau(dist, rng)] += 1.0;
    double tv = 0.0;
    for (std::int64_t j = 0; j < c.n; ++j) {
      tv += std::abs(counts[j] / draws - dist.weights[j]);
    }
    tv *= 0.5;
    CHECK(tv < 0.005);
  }
}
