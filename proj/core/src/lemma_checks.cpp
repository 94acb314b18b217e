#include "adaconv/lemma_checks.hpp"

#include <cmath>
#include <stdexcept>

namespace adaconv {

namespace {

void check_decay(double beta2, double epsilon) {
  if (!(beta2 > 0.0) || !(beta2 <= 1.0)) {
    throw std::invalid_argument("beta2 must lie in (0, 1]");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
}

}  // namespace

InequalityCheck check_sum_ratio(const SequenceInstance& inst) {
  check_decay(inst.beta2, inst.epsilon);
  double b = 0.0;
  double lhs = 0.0;
  for (double a : inst.a) {
    if (a < 0.0) throw std::invalid_argument("sequence must be non-negative");
    b = inst.beta2 * b + a;
    lhs += a / (inst.epsilon + b);
  }
  const double rhs = std::log1p(b / inst.epsilon) -
                     static_cast<double>(inst.a.size()) * std::log(inst.beta2);
  return {lhs, rhs, lhs <= rhs + kIneqSlack};
}

InequalityCheck check_momentum_sum_ratio(const MomentumSequenceInstance& inst) {
  check_decay(inst.beta2, inst.epsilon);
  if (!(inst.beta1 > 0.0) || !(inst.beta1 < inst.beta2)) {
    throw std::invalid_argument("0 < beta1 < beta2 is required");
  }
  double b = 0.0, c = 0.0, lhs = 0.0;
  for (double a : inst.a) {
    c = inst.beta1 * c + a;
    b = inst.beta2 * b + a * a;
    lhs += c * c / (inst.epsilon + b);
  }
  const double rhs =
      (std::log1p(b / inst.epsilon) -
       static_cast<double>(inst.a.size()) * std::log(inst.beta2)) /
      ((1.0 - inst.beta1) * (1.0 - inst.beta1 / inst.beta2));
  return {lhs, rhs, lhs <= rhs + kIneqSlack};
}

GeometricTailReport geometric_tail_checks(double a, std::int64_t q_count) {
  if (!(a > 0.0) || !(a < 1.0)) {
    throw std::invalid_argument("a must lie in (0, 1)");
  }
  GeometricTailReport rep{};
  double pow_a = 1.0;
  for (std::int64_t q = 0; q < q_count; ++q) {
    const double qd = static_cast<double>(q);
    rep.sum_sqrt += pow_a * std::sqrt(qd + 1.0);
    rep.sum_32 += pow_a * std::sqrt(qd) * (qd + 1.0);
    pow_a *= a;
  }
  rep.bound_sqrt_tight =
      (1.0 + std::sqrt(M_PI) / (2.0 * std::sqrt(-std::log(a)))) / (1.0 - a);
  rep.bound_sqrt = 2.0 / std::pow(1.0 - a, 1.5);
  rep.bound_32 = 4.0 * a / std::pow(1.0 - a, 2.5);
  rep.holds = rep.sum_sqrt <= rep.bound_sqrt_tight + kIneqSlack &&
              rep.sum_sqrt <= rep.bound_sqrt + kIneqSlack &&
              rep.sum_32 <= rep.bound_32 + kIneqSlack;
  return rep;
}

GeomIndexReport geom_index_closed_form(double a, std::int64_t i,
                                       std::int64_t q) {
  if (!(a > 0.0) || !(a < 1.0)) {
    throw std::invalid_argument("a must lie in (0, 1)");
  }
  if (i < 0 || q < i) throw std::invalid_argument("0 <= i <= Q is required");
  GeomIndexReport rep{};
  double pow_a = std::pow(a, static_cast<double>(i));
  for (std::int64_t k = i; k <= q; ++k) {
    rep.brute += pow_a * static_cast<double>(k);
    pow_a *= a;
  }
  const double id = static_cast<double>(i);
  const double qd = static_cast<double>(q);
  rep.closed = std::pow(a, id) / (1.0 - a) *
               (id - std::pow(a, qd - id + 1.0) * qd +
                (a - std::pow(a, qd + 1.0 - id)) / (1.0 - a));
  rep.bound = a / ((1.0 - a) * (1.0 - a));
  const double scale = std::max(std::abs(rep.brute), std::abs(rep.closed));
  rep.match = std::abs(rep.brute - rep.closed) <= 1e-12 * std::max(scale, 1.0);
  rep.bounded = i != 0 || rep.brute <= rep.bound + kIneqSlack;
  return rep;
}

InequalityCheck check_descent_lemma(const DescentInstance& inst) {
  check_decay(inst.beta2, inst.epsilon);
  if (inst.v_prev < 0.0) throw std::invalid_argument("v_prev must be >= 0");
  const double sqrt_eps = std::sqrt(inst.epsilon);
  double prob_sum = 0.0;
  for (const auto& [p, g] : inst.support) {
    if (!(p > 0.0)) throw std::invalid_argument("probabilities must be positive");
    if (std::abs(g) > inst.r_bound - sqrt_eps) {
      throw std::invalid_argument("support violates |g| <= R - sqrt(eps)");
    }
    prob_sum += p;
  }
  if (std::abs(prob_sum - 1.0) > 1e-12) {
    throw std::invalid_argument("probabilities must sum to 1");
  }

  double mean = 0.0, second = 0.0;
  for (const auto& [p, g] : inst.support) {
    mean += p * g;
    second += p * g * g;
  }
  const double decayed = inst.beta2 * inst.v_prev;
  const double v_tilde = decayed + second;

  double lhs = 0.0, ratio_term = 0.0;
  for (const auto& [p, g] : inst.support) {
    const double v = decayed + g * g;
    lhs += p * mean * g / std::sqrt(inst.epsilon + v);
    ratio_term += p * g * g / (inst.epsilon + v);
  }
  const double rhs = mean * mean / (2.0 * std::sqrt(inst.epsilon + v_tilde)) -
                     2.0 * inst.r_bound * ratio_term;
  return {lhs, rhs, lhs >= rhs - kIneqSlack};
}

}  // namespace adaconv
