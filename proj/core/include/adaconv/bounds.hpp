#pragma once

#include <cstdint>

namespace adaconv {

// Constants feeding every convergence-theorem right-hand side.
// For the adaptive theorems R is the a.s. l-inf gradient bound (with the
// R >= sqrt(epsilon) shift) and sigma is unused; for the SGD theorem R
// bounds ||grad F||_2 and sigma^2 the gradient variance.
struct BoundInputs {
  std::int64_t d;
  double r_bound;         // R
  double smoothness;      // L
  double f0_minus_fstar;  // F(x0) - F*
  double epsilon;
  std::int64_t n;         // horizon N
  double alpha;
  double beta1;
  double beta2;
  double sigma;
};

struct BoundValue {
  double term_init;  // initial-condition term
  double term_log;   // log / variance term
  double total;      // term_init + term_log
  double c_coeff;    // the theorem's C prefactor, 0 when it has none
  bool valid;        // horizon condition satisfied
};

// Adagrad, no momentum (beta2 = 1, beta1 = 0):
//   2 R (F0 - F*) / (alpha sqrt(N))
//   + (4 d R^2 + alpha d R L) ln(1 + N R^2 / eps) / sqrt(N).
BoundValue adagrad_bound(const BoundInputs& in);

// Adam, no momentum (0 < beta2 < 1, beta1 = 0):
//   2 R (F0 - F*) / (alpha N) + C (ln(1 + R^2/((1-beta2) eps))/N - ln beta2),
//   C = 4 d R^2 / sqrt(1-beta2) + alpha d R L / (1-beta2).
BoundValue adam_bound(const BoundInputs& in);

// Adagrad with heavy-ball momentum (beta2 = 1), valid for N > beta1/(1-beta1):
//   2 R sqrt(N) (F0 - F*) / (alpha Ntilde)
//   + (sqrt(N)/Ntilde) C ln(1 + N R^2 / eps),
//   C = alpha d R L + 12 d R^2/(1-beta1) + 2 alpha^2 d L^2 beta1/(1-beta1).
BoundValue adagrad_momentum_bound(const BoundInputs& in);

// Adam with heavy-ball momentum (0 < beta2 < 1, 0 <= beta1 < beta2), valid
// for N > beta1/(1-beta1):
//   2 R (F0 - F*) / (alpha Ntilde)
//   + C (ln(1 + R^2/((1-beta2) eps))/Ntilde - (N/Ntilde) ln beta2),
//   C = alpha d R L (1-beta1) / ((1-beta1/beta2)(1-beta2))
//     + 12 d R^2 sqrt(1-beta1) / ((1-beta1/beta2)^{3/2} sqrt(1-beta2))
//     + 2 alpha^2 d L^2 beta1 / ((1-beta1/beta2)(1-beta2)^{3/2}).
BoundValue adam_momentum_bound(const BoundInputs& in);

// Heavy-ball SGD, valid for N > 1/(1-beta1):
//   (1-beta1)(F0 - F*)/(alpha Ntilde)
//   + (N/Ntilde) alpha L (1+beta1)(R^2 + sigma^2) / (2 (1-beta1)^2).
BoundValue sgd_momentum_bound(const BoundInputs& in);

// The comparison bound for heavy-ball SGD from earlier work, stated for
// alpha = (1-beta1) min(1/L, C/sqrt(N)):
//   (2/N)(F0 - F*) max(2L, sqrt(N)/C)
//   + (C/sqrt(N)) (L/(1-beta1)^2)(beta1^2 (R^2+sigma^2) + (1-beta1)^2 sigma^2).
double reference_sgd_bound(const BoundInputs& in, double c_const);

struct FiniteHorizonParams {
  double alpha;  // alpha1 / sqrt(N)
  double beta2;  // 1 - 1/N
};

// The finite-horizon parameter rule under which the Adam bound matches the
// Adagrad one. Requires N >= 2.
FiniteHorizonParams finite_horizon_params(std::int64_t n, double alpha1);

}  // namespace adaconv
