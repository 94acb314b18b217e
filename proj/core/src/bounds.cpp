#include "adaconv/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "adaconv/tau.hpp"

namespace adaconv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_common(const BoundInputs& in) {
  if (in.d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (in.n < 1) throw std::invalid_argument("horizon must be >= 1");
  if (!(in.alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(in.epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (in.f0_minus_fstar < 0.0) {
    throw std::invalid_argument("F(x0) - F* must be non-negative");
  }
  if (!(in.smoothness > 0.0)) {
    throw std::invalid_argument("smoothness must be positive");
  }
}

void check_r_shift(const BoundInputs& in) {
  if (in.r_bound < std::sqrt(in.epsilon)) {
    throw std::invalid_argument("R >= sqrt(epsilon) is required");
  }
}

BoundValue invalid_horizon() {
  return {kInf, kInf, kInf, kInf, false};
}

// -ln(beta2), accurate for beta2 near 1.
double neg_log(double beta2) { return -std::log1p(beta2 - 1.0); }

}  // namespace

BoundValue adagrad_bound(const BoundInputs& in) {
  check_common(in);
  check_r_shift(in);
  const double d = static_cast<double>(in.d);
  const double n = static_cast<double>(in.n);
  const double r = in.r_bound;
  const double term_init =
      2.0 * r * in.f0_minus_fstar / (in.alpha * std::sqrt(n));
  const double term_log = (4.0 * d * r * r + in.alpha * d * r * in.smoothness) *
                          std::log1p(n * r * r / in.epsilon) / std::sqrt(n);
  return {term_init, term_log, term_init + term_log, 0.0, true};
}

BoundValue adam_bound(const BoundInputs& in) {
  check_common(in);
  check_r_shift(in);
  if (in.beta2 >= 1.0) {
    throw std::invalid_argument("beta2 = 1 is the Adagrad case; use adagrad_bound");
  }
  if (!(in.beta2 > 0.0)) throw std::invalid_argument("beta2 must be positive");
  const double d = static_cast<double>(in.d);
  const double n = static_cast<double>(in.n);
  const double r = in.r_bound;
  const double one_minus_b2 = 1.0 - in.beta2;
  const double c = 4.0 * d * r * r / std::sqrt(one_minus_b2) +
                   in.alpha * d * r * in.smoothness / one_minus_b2;
  const double term_init = 2.0 * r * in.f0_minus_fstar / (in.alpha * n);
  const double term_log =
      c * (std::log1p(r * r / (one_minus_b2 * in.epsilon)) / n +
           neg_log(in.beta2));
  return {term_init, term_log, term_init + term_log, c, true};
}

BoundValue adagrad_momentum_bound(const BoundInputs& in) {
  check_common(in);
  check_r_shift(in);
  if (!(in.beta1 >= 0.0) || !(in.beta1 < 1.0)) {
    throw std::invalid_argument("beta1 must lie in [0, 1)");
  }
  const auto horizon = effective_n(in.n, in.beta1);
  if (!horizon.valid) return invalid_horizon();
  const double d = static_cast<double>(in.d);
  const double n = static_cast<double>(in.n);
  const double r = in.r_bound;
  const double l = in.smoothness;
  const double c = in.alpha * d * r * l +
                   12.0 * d * r * r / (1.0 - in.beta1) +
                   2.0 * in.alpha * in.alpha * d * l * l * in.beta1 /
                       (1.0 - in.beta1);
  const double term_init =
      2.0 * r * std::sqrt(n) * in.f0_minus_fstar / (in.alpha * horizon.value);
  const double term_log = std::sqrt(n) / horizon.value * c *
                          std::log1p(n * r * r / in.epsilon);
  return {term_init, term_log, term_init + term_log, c, true};
}

BoundValue adam_momentum_bound(const BoundInputs& in) {
  check_common(in);
  check_r_shift(in);
  if (in.beta2 >= 1.0) {
    throw std::invalid_argument("beta2 = 1 is the Adagrad case; use adagrad_momentum_bound");
  }
  if (!(in.beta2 > 0.0)) throw std::invalid_argument("beta2 must be positive");
  if (!(in.beta1 >= 0.0) || !(in.beta1 < in.beta2)) {
    throw std::invalid_argument("0 <= beta1 < beta2 is required");
  }
  const auto horizon = effective_n(in.n, in.beta1);
  if (!horizon.valid) return invalid_horizon();
  const double d = static_cast<double>(in.d);
  const double n = static_cast<double>(in.n);
  const double r = in.r_bound;
  const double l = in.smoothness;
  const double one_minus_b2 = 1.0 - in.beta2;
  const double ratio = 1.0 - in.beta1 / in.beta2;
  const double c =
      in.alpha * d * r * l * (1.0 - in.beta1) / (ratio * one_minus_b2) +
      12.0 * d * r * r * std::sqrt(1.0 - in.beta1) /
          (std::pow(ratio, 1.5) * std::sqrt(one_minus_b2)) +
      2.0 * in.alpha * in.alpha * d * l * l * in.beta1 /
          (ratio * std::pow(one_minus_b2, 1.5));
  const double term_init =
      2.0 * r * in.f0_minus_fstar / (in.alpha * horizon.value);
  const double term_log =
      c * (std::log1p(r * r / (one_minus_b2 * in.epsilon)) / horizon.value +
           n / horizon.value * neg_log(in.beta2));
  return {term_init, term_log, term_init + term_log, c, true};
}

BoundValue sgd_momentum_bound(const BoundInputs& in) {
  check_common(in);
  if (!(in.beta1 >= 0.0) || !(in.beta1 < 1.0)) {
    throw std::invalid_argument("beta1 must lie in [0, 1)");
  }
  if (in.sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
  const auto horizon = effective_n(in.n, in.beta1);
  const bool valid =
      static_cast<double>(in.n) > 1.0 / (1.0 - in.beta1);
  if (!(horizon.value > 0.0)) return invalid_horizon();
  const double n = static_cast<double>(in.n);
  const double one_minus_b1 = 1.0 - in.beta1;
  const double moment = in.r_bound * in.r_bound + in.sigma * in.sigma;
  const double term_init =
      one_minus_b1 * in.f0_minus_fstar / (in.alpha * horizon.value);
  const double term_log = n / horizon.value * in.alpha * in.smoothness *
                          (1.0 + in.beta1) * moment /
                          (2.0 * one_minus_b1 * one_minus_b1);
  return {term_init, term_log, term_init + term_log, 0.0, valid};
}

double reference_sgd_bound(const BoundInputs& in, double c_const) {
  check_common(in);
  if (!(c_const > 0.0)) throw std::invalid_argument("C must be positive");
  const double n = static_cast<double>(in.n);
  const double one_minus_b1 = 1.0 - in.beta1;
  const double term_init =
      2.0 / n * in.f0_minus_fstar *
      std::max(2.0 * in.smoothness, std::sqrt(n) / c_const);
  const double moment = in.r_bound * in.r_bound + in.sigma * in.sigma;
  const double term_var =
      c_const / std::sqrt(n) * in.smoothness /
      (one_minus_b1 * one_minus_b1) *
      (in.beta1 * in.beta1 * moment +
       one_minus_b1 * one_minus_b1 * in.sigma * in.sigma);
  return term_init + term_var;
}

FiniteHorizonParams finite_horizon_params(std::int64_t n, double alpha1) {
  if (n < 2) throw std::invalid_argument("N >= 2 is required");
  if (!(alpha1 > 0.0)) throw std::invalid_argument("alpha1 must be positive");
  const double nd = static_cast<double>(n);
  return {alpha1 / std::sqrt(nd), 1.0 - 1.0 / nd};
}

}  // namespace adaconv
