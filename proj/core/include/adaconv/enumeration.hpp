#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adaconv/bounds.hpp"
#include "adaconv/lemma_checks.hpp"
#include "adaconv/objectives.hpp"
#include "adaconv/optim.hpp"

namespace adaconv {

// Exact expectations over all K^N equally structured i.i.d. sample paths of
// a finite-support objective, obtained by exhaustive enumeration.
struct EnumerationReport {
  std::int64_t path_count = 0;
  double prob_sum = 0.0;
  double expected_final_value = 0.0;    // E F(x_N)
  std::vector<double> grad_sq;          // E||grad F(x_j)||^2, j = 0..N-1
  double grad_sq_tau = 0.0;             // E||grad F(x_tau)||^2
  std::vector<double> momentum_sq;      // E||m_n||^2, n = 1..N
  std::vector<double> update_sq;        // E||m_n / sqrt(eps+v_n)||^2
  std::vector<double> raw_update_sq;    // E||g_n / sqrt(eps+v_n)||^2
  // Per-iteration descent inequality, exact on both sides: the momentum
  // descent lemma for the adaptive recursion (checked for n up to the
  // configured limit; the conditional re-centering makes it cost K^n per
  // iteration), the heavy-ball SGD descent lemma otherwise.
  std::vector<InequalityCheck> descent;
};

// Enumerates every path of length n_steps (guarded by K^N <= 10^6) and runs
// the exact recursion along each. For sgd_hb, h.alpha / h.beta1 are the
// plain step size and momentum.
EnumerationReport exact_trajectory_expectations(
    const FiniteSupportObjective& obj, const HyperParams& h,
    Algorithm algorithm, std::int64_t n_steps, std::span<const double> x0 = {},
    int descent_check_limit = 6);

enum class TheoremId { adagrad, adam, adagrad_momentum, adam_momentum, sgd };

struct TheoremCheck {
  double exact_lhs;    // exact E||grad F(x_tau)||^2
  double bound_rhs;    // theorem RHS with the objective's exact constants
  bool valid;          // horizon condition satisfied; no claim when false
  bool holds;          // exact_lhs <= bound_rhs (when valid)
  BoundInputs inputs;  // constants fed to the bound
};

// Checks one convergence theorem against the exact enumerated expectation.
// Throws when the hyper-parameters contradict the theorem's preconditions
// (e.g. beta1 != 0 for the no-momentum theorems).
TheoremCheck check_theorem_bound(const FiniteSupportObjective& obj,
                                 const HyperParams& h, TheoremId theorem,
                                 std::int64_t n_steps,
                                 std::span<const double> x0 = {});

}  // namespace adaconv
