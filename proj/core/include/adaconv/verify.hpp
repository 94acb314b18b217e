#pragma once

#include <cstdint>
#include <string>

namespace adaconv {

struct VerifyOutcome {
  bool passed;
  std::string json_report;
};

// Full randomized + enumerative lemma suite: the closed-form sum identity,
// the sum-of-ratio inequalities, the geometric-tail bounds, the exact
// finite-support descent lemma, and the enumeration-level momentum descent /
// momentum-norm / SGD descent checks. The report lists per-lemma instance
// counts and the largest slack observed.
VerifyOutcome verify_lemmas(std::uint64_t seed);

// Theorem dominance over an enumerable objective: exact E||grad F(x_tau)||^2
// against every convergence bound across a hyper-parameter grid.
// config_json may override {objective, iterations, epsilon, alphas, beta1s,
// beta2s}; pass "" for the built-in two-atom default.
VerifyOutcome verify_bounds(const std::string& config_json);

// Evaluates every bound whose preconditions match the given inputs.
// Input JSON: {d, r_bound, smoothness, f0_minus_fstar, epsilon, n, alpha,
// beta1, beta2, sigma[, ref_c]}. Returns the per-bound breakdowns.
std::string eval_bounds(const std::string& inputs_json);

}  // namespace adaconv
