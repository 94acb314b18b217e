#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "adaconv/objectives.hpp"
#include "adaconv/rng.hpp"

using namespace adaconv;

TEST_CASE("huber primitive") {
  CHECK(huber(0.5).value == doctest::Approx(0.125));
  CHECK(huber(0.5).derivative == doctest::Approx(0.5));
  CHECK(huber(-2.0).value == doctest::Approx(1.5));
  CHECK(huber(-2.0).derivative == doctest::Approx(-1.0));
  // C^1 at the breakpoints.
  CHECK(huber(1.0).value == doctest::Approx(0.5));
  CHECK(huber(1.0).derivative == doctest::Approx(1.0));
}

TEST_CASE("toy problem closed forms") {
  const ToyProblem obj;
  CHECK(obj.dim() == 6);
  CHECK(obj.probability(0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(obj.probability(5) == doctest::Approx(1e-6).epsilon(1e-12));

  // Frozen values computed independently at 50-digit precision.
  CHECK(obj.f_star() == doctest::Approx(0.63185716426047350171).epsilon(1e-14));
  CHECK(obj.minimizer()[0] ==
        doctest::Approx(0.64863581553684674089).epsilon(1e-14));
  CHECK(obj.minimizer()[5] ==
        doctest::Approx(0.998999998999999).epsilon(1e-14));

  const std::vector<double> zero(6, 0.0);
  CHECK(obj.true_value(zero) ==
        doctest::Approx(3.1754509101393450529).epsilon(1e-14));
  std::vector<double> g(6);
  obj.true_grad(zero, g);
  CHECK(g[0] == doctest::Approx(-0.5837722339831620668).epsilon(1e-14));
  CHECK(g[5] == doctest::Approx(-0.998999).epsilon(1e-14));

  const auto var = obj.variance(zero);
  CHECK(var[0] == doctest::Approx(1.5592099788303082798).epsilon(1e-13));
  CHECK(var[5] == doctest::Approx(1.001999997999).epsilon(1e-13));

  // The minimizer has zero expected gradient.
  obj.true_grad(obj.minimizer(), g);
  for (double c : g) CHECK(std::abs(c) < 1e-12);
  CHECK(obj.true_value(obj.minimizer()) ==
        doctest::Approx(obj.f_star()).epsilon(1e-15));
}

TEST_CASE("toy gradient matches finite differences") {
  const ToyProblem obj;
  RngStream rng(2024);
  std::vector<double> x(6), g(6), xp(6), xm(6);
  for (int trial = 0; trial < 100; ++trial) {
    for (auto& c : x) c = -3.0 + 6.0 * rng.next_double();
    obj.true_grad(x, g);
    for (int i = 0; i < 6; ++i) {
      xp = x;
      xm = x;
      xp[i] += 1e-6;
      xm[i] -= 1e-6;
      const double fd = (obj.true_value(xp) - obj.true_value(xm)) / 2e-6;
      CHECK(std::abs(fd - g[i]) < 1e-6);
    }
  }
}

TEST_CASE("toy sampler is unbiased at x = 0") {
  const ToyProblem obj;
  RngStream rng(7);
  const std::vector<double> zero(6, 0.0);
  std::vector<double> g(6), sum(6, 0.0);
  const int n = 1'000'000;
  for (int t = 0; t < n; ++t) {
    obj.sample_grad(zero, rng, g);
    for (int i = 0; i < 6; ++i) sum[i] += g[i];
  }
  std::vector<double> mean_exact(6);
  obj.true_grad(zero, mean_exact);
  const auto var = obj.variance(zero);
  for (int i = 0; i < 6; ++i) {
    const double se = std::sqrt(var[i] / n);
    CHECK(std::abs(sum[i] / n - mean_exact[i]) < 4.0 * se);
  }
}

TEST_CASE("toy heuristic constants") {
  const ToyProblem obj;
  // L-inf bound of the expected gradient plus the largest atom weight
  // 1/sqrt(1e-6) = 1000.
  CHECK(obj.grad_bound().value() ==
        doctest::Approx((1.0 - 0.1) + std::sqrt(0.1) + 1000.0).epsilon(1e-12));
  CHECK(obj.smoothness().value() ==
        doctest::Approx(1.0 - 1e-6).epsilon(1e-12));
}

TEST_CASE("finite-support objective validation") {
  using Atom = FiniteSupportObjective::Atom;
  CHECK_THROWS_AS(FiniteSupportObjective({}), std::invalid_argument);
  // Probabilities must sum to 1.
  CHECK_THROWS_AS(
      FiniteSupportObjective({Atom{0.5, {{{1.0, 0.0}}}}}),
      std::invalid_argument);
  // Expected tail slope negative in one coordinate: unbounded below.
  CHECK_THROWS_AS(
      FiniteSupportObjective({Atom{1.0, {{{-1.0, 0.0}}}}}),
      std::invalid_argument);
  // Dimension mismatch across atoms.
  CHECK_THROWS_AS(
      FiniteSupportObjective({Atom{0.5, {{{1.0, 0.0}}}},
                              Atom{0.5, {{{1.0, 0.0}}, {{1.0, 0.0}}}}}),
      std::invalid_argument);
}

TEST_CASE("finite-support exact constants on a worked instance") {
  // Atom A (p = 0.5): huber(x - 1); atom B (p = 0.5): 0.6 huber(x + 1).
  FiniteSupportObjective obj(
      {{0.5, {{{1.0, 1.0}}}}, {0.5, {{{0.6, -1.0}}}}});
  CHECK(obj.dim() == 1);

  // E f(x) = 0.5 h(x-1) + 0.3 h(x+1); on (0, 2) the second huber is linear
  // so the slope is 0.5(x-1) + 0.3, zero at x = 0.4 with value
  // 0.5 h(-0.6) + 0.3 h(1.4) = 0.09 + 0.27.
  CHECK(obj.minimizer()[0] == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(obj.f_star() == doctest::Approx(0.36).epsilon(1e-14));

  // a.s. slope bound: atom A slope in [-1, 1], atom B in [-0.6, 0.6].
  CHECK(obj.grad_linf_bound() == doctest::Approx(1.0).epsilon(1e-15));
  // sup |E grad|: at x <= -2, slope = 0.5*(-1) + 0.3*(-1) = -0.8.
  CHECK(obj.sgd_grad_norm_sq_bound() == doctest::Approx(0.64).epsilon(1e-13));
  // Variance is maximal at x = 0: E g = 0.5(-1) + 0.3(1) = -0.2,
  // E g^2 = 0.5 + 0.5*0.36 = 0.68, var = 0.64.
  CHECK(obj.sgd_variance_bound() == doctest::Approx(0.64).epsilon(1e-13));
  // Curvature: 0.5 on (0,2), 0.3 on (-2,0), 0.8 on the overlap (0 width
  // here); midpoint probe of (-2,0) sees 0.3, of (0,2) sees 0.5.
  CHECK(obj.smoothness().value() == doctest::Approx(0.5).epsilon(1e-15));

  // Value / gradient / sampling consistency.
  const std::vector<double> x{0.3};
  std::vector<double> g(1);
  obj.true_grad(x, g);
  CHECK(g[0] == doctest::Approx(0.5 * (0.3 - 1.0) + 0.3 * 1.0).epsilon(1e-14));
  RngStream rng(5);
  double mean = 0.0;
  for (int t = 0; t < 200000; ++t) {
    std::vector<double> s(1);
    obj.sample_grad(x, rng, s);
    mean += s[0];
  }
  CHECK(std::abs(mean / 200000 - g[0]) < 0.01);
}

TEST_CASE("overlapping Huber terms accumulate curvature") {
  FiniteSupportObjective obj({{1.0, {{{1.0, 0.0}, {0.5, 0.5}}}}});
  // On (-0.5, 1) both terms are quadratic: curvature 1.5.
  CHECK(obj.smoothness().value() == doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("toy coordinate as a two-atom objective") {
  const double p = 0.01;
  const auto obj = toy_coordinate_as_atoms(p);
  const ToyProblem toy;
  // Coordinate 1 of the toy problem has p = 0.01; compare closed forms.
  std::vector<double> x{0.4}, g1(1);
  obj.true_grad(x, g1);
  const double expect =
      (1.0 - p) * huber(0.4 - 1.0).derivative +
      std::sqrt(p) * huber(0.4 + 1.0).derivative;
  CHECK(g1[0] == doctest::Approx(expect).epsilon(1e-14));
  CHECK(obj.minimizer()[0] ==
        doctest::Approx(1.0 - std::sqrt(p) / (1.0 - p)).epsilon(1e-12));
  CHECK(obj.grad_linf_bound() == doctest::Approx(1.0 / std::sqrt(p)).epsilon(1e-13));
}
