#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "adaconv/enumeration.hpp"
#include "adaconv/tau.hpp"

using namespace adaconv;

namespace {

FiniteSupportObjective two_atom() {
  return FiniteSupportObjective(
      {{0.5, {{{1.0, 1.0}}}}, {0.5, {{{0.6, -1.0}}}}});
}

// Independent re-implementation of the exact expectations: iterates over all
// K^N digit strings with naive state updates and textbook formulas (pow-based
// step size, no shared code paths with the library enumerator).
struct NaiveReport {
  double prob_sum = 0.0;
  double final_value = 0.0;
  std::vector<double> grad_sq;
  std::vector<double> momentum_sq;
  double grad_sq_tau = 0.0;
};

NaiveReport naive_enumerate(const FiniteSupportObjective& obj,
                            const HyperParams& h, Algorithm alg,
                            std::int64_t n_steps) {
  const int d = obj.dim();
  const std::size_t k = obj.atom_count();
  std::size_t paths = 1;
  for (std::int64_t j = 0; j < n_steps; ++j) paths *= k;

  // Per-iterate expectations are accumulated with the *full* path
  // probability; the suffix choices after step j sum to 1, so this equals
  // weighting by the prefix probability once all paths are in.
  NaiveReport rep;
  rep.grad_sq.assign(n_steps, 0.0);
  rep.momentum_sq.assign(n_steps, 0.0);
  for (std::size_t code = 0; code < paths; ++code) {
    std::vector<std::size_t> digits(n_steps);
    std::size_t c = code;
    for (std::int64_t j = 0; j < n_steps; ++j) {
      digits[j] = c % k;
      c /= k;
    }
    double prob = 1.0;
    for (std::int64_t j = 0; j < n_steps; ++j) prob *= obj.atom_prob(digits[j]);

    std::vector<double> x(d, 0.0), m(d, 0.0), v(d, 0.0), g(d), tg(d);
    for (std::int64_t j = 0; j < n_steps; ++j) {
      obj.true_grad(x, tg);
      double gsq = 0.0;
      for (int i = 0; i < d; ++i) gsq += tg[i] * tg[i];
      rep.grad_sq[j] += prob * gsq;

      obj.atom_grad(digits[j], x, g);
      const std::int64_t n = j + 1;
      const double alpha_n =
          alg == Algorithm::adaptive
              ? (h.beta2 < 1.0
                     ? h.alpha * (1.0 - h.beta1) *
                           std::sqrt((1.0 - std::pow(h.beta2, n)) /
                                     (1.0 - h.beta2))
                     : h.alpha * (1.0 - h.beta1))
              : h.alpha;
      double msq = 0.0;
      for (int i = 0; i < d; ++i) {
        m[i] = h.beta1 * m[i] + g[i];
        msq += m[i] * m[i];
        if (alg == Algorithm::adaptive) {
          v[i] = h.beta2 * v[i] + g[i] * g[i];
          x[i] -= alpha_n * m[i] / std::sqrt(h.epsilon + v[i]);
        } else {
          x[i] -= alpha_n * m[i];
        }
      }
      rep.momentum_sq[j] += prob * msq;
    }
    rep.prob_sum += prob;
    rep.final_value += prob * obj.true_value(x);
  }
  const auto tau = tau_weights(n_steps, h.beta1);
  for (std::int64_t j = 0; j < n_steps; ++j) {
    rep.grad_sq_tau += tau.weights[j] * rep.grad_sq[j];
  }
  return rep;
}

}  // namespace

TEST_CASE("single-atom enumeration is one deterministic path") {
  FiniteSupportObjective det({{1.0, {{{1.0, 1.0}}}}});
  const HyperParams h(0.1, 0.5, 1.0);
  const auto rep = exact_trajectory_expectations(det, h, Algorithm::adaptive, 4);
  CHECK(rep.path_count == 1);
  CHECK(rep.prob_sum == doctest::Approx(1.0).epsilon(1e-15));
  // E||grad F(x_tau)||^2 equals the tau-weighted average along the path.
  const auto tau = tau_weights(4, 0.5);
  double expect = 0.0;
  for (int j = 0; j < 4; ++j) expect += tau.weights[j] * rep.grad_sq[j];
  CHECK(rep.grad_sq_tau == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("symmetric SGD paths have the uniform law") {
  // +-1 gradients with probability 1/2: 4 paths of length 2, prob 1/4 each.
  FiniteSupportObjective sym({{0.5, {{{1.0, -10.0}}}},   // slope +1 near 0
                              {0.5, {{{1.0, 10.0}}}}});  // slope -1 near 0
  const HyperParams h(1.0, 0.0, 1.0);
  const auto rep = exact_trajectory_expectations(sym, h, Algorithm::sgd_hb, 2);
  CHECK(rep.path_count == 4);
  CHECK(rep.prob_sum == doctest::Approx(1.0).epsilon(1e-15));
  // E grad F = 0 everywhere between the far-apart centers.
  CHECK(rep.grad_sq[0] == doctest::Approx(0.0));
  // E||m_1||^2 = 1 (gradient is +-1).
  CHECK(rep.momentum_sq[0] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("library enumerator matches the naive dual implementation") {
  const auto obj = two_atom();
  struct Case {
    HyperParams h;
    Algorithm alg;
  };
  const std::vector<Case> cases{
      {HyperParams(0.1, 0.9, 0.999, 1e-8), Algorithm::adaptive},
      {HyperParams(0.1, 0.0, 1.0, 1e-8), Algorithm::adaptive},
      {HyperParams(0.3, 0.5, 0.9, 1e-6), Algorithm::adaptive},
      {HyperParams(0.2, 0.7, 1.0, 1e-8), Algorithm::sgd_hb},
  };
  for (const auto& c : cases) {
    const auto lib =
        exact_trajectory_expectations(obj, c.h, c.alg, 8, {}, 0);
    const auto naive = naive_enumerate(obj, c.h, c.alg, 8);
    CHECK(lib.path_count == 256);
    CHECK(lib.prob_sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lib.expected_final_value ==
          doctest::Approx(naive.final_value).epsilon(1e-12));
    CHECK(lib.grad_sq_tau == doctest::Approx(naive.grad_sq_tau).epsilon(1e-12));
    for (int j = 0; j < 8; ++j) {
      CHECK(lib.grad_sq[j] == doctest::Approx(naive.grad_sq[j]).epsilon(1e-12));
      CHECK(lib.momentum_sq[j] ==
            doctest::Approx(naive.momentum_sq[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("enumerability guard") {
  const auto obj = two_atom();
  const HyperParams h(0.1, 0.0, 1.0);
  CHECK_THROWS_AS(
      exact_trajectory_expectations(obj, h, Algorithm::adaptive, 21),
      std::invalid_argument);
}

TEST_CASE("momentum norm bound (exact second moments)") {
  const auto obj = two_atom();
  const double moment =
      obj.sgd_grad_norm_sq_bound() + obj.sgd_variance_bound();
  for (double b1 : {0.0, 0.5, 0.9}) {
    const HyperParams h(0.1, b1, 1.0);
    const auto rep =
        exact_trajectory_expectations(obj, h, Algorithm::sgd_hb, 10);
    for (double msq : rep.momentum_sq) {
      CHECK(msq <= moment / ((1.0 - b1) * (1.0 - b1)) + 1e-12);
    }
    for (const auto& c : rep.descent) CHECK(c.holds);
  }
}

TEST_CASE("adaptive descent checks hold under enumeration") {
  const auto obj = two_atom();
  for (const auto& [b1, b2] : std::vector<std::pair<double, double>>{
           {0.0, 1.0}, {0.5, 0.999}, {0.9, 0.999}, {0.5, 1.0}}) {
    const HyperParams h(0.25, b1, b2, 1e-8);
    const auto rep =
        exact_trajectory_expectations(obj, h, Algorithm::adaptive, 6, {}, 6);
    CHECK(rep.descent.size() == 6);
    for (const auto& c : rep.descent) CHECK(c.holds);
  }
}

TEST_CASE("theorem checks on the worked objective") {
  const auto obj = two_atom();
  // Valid horizon: holds (this is the theorem evaluated exactly).
  const auto ag = check_theorem_bound(obj, HyperParams(0.1, 0.0, 1.0),
                                      TheoremId::adagrad, 8);
  CHECK(ag.valid);
  CHECK(ag.holds);
  CHECK(ag.exact_lhs > 0.0);
  CHECK(ag.exact_lhs <= ag.bound_rhs);

  // beta1 = 0.9: the momentum bound needs N > 9; N = 8 makes no claim.
  const auto inv = check_theorem_bound(obj, HyperParams(0.1, 0.9, 1.0),
                                       TheoremId::adagrad_momentum, 8);
  CHECK_FALSE(inv.valid);
  CHECK(inv.holds);

  // Hyper-parameters contradicting the theorem preconditions throw.
  CHECK_THROWS_AS(check_theorem_bound(obj, HyperParams(0.1, 0.5, 1.0),
                                      TheoremId::adagrad, 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_theorem_bound(obj, HyperParams(0.1, 0.0, 0.999),
                                      TheoremId::adagrad, 8),
                  std::invalid_argument);
}
