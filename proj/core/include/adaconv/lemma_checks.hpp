#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace adaconv {

struct InequalityCheck {
  double lhs;
  double rhs;
  bool holds;
};

// Additive slack absorbing double-precision rounding in inequality checks.
inline constexpr double kIneqSlack = 1e-12;

// Sum-of-ratios inequality for a non-negative sequence (a_j):
//   sum_j a_j / (eps + b_j) <= ln(1 + b_N / eps) - N ln(beta2),
// with b_j = sum_{k<=j} beta2^{j-k} a_k.
struct SequenceInstance {
  std::vector<double> a;
  double beta2;    // (0, 1]
  double epsilon;  // > 0
};
InequalityCheck check_sum_ratio(const SequenceInstance& inst);

// Momentum variant: with c_j = sum beta1^{j-k} a_k and
// b_j = sum beta2^{j-k} a_k^2,
//   sum_j c_j^2/(eps + b_j)
//     <= (ln(1 + b_n/eps) - n ln beta2) / ((1-beta1)(1-beta1/beta2)).
struct MomentumSequenceInstance {
  std::vector<double> a;  // signs allowed
  double beta1;           // (0, beta2)
  double beta2;           // (0, 1]
  double epsilon;
};
InequalityCheck check_momentum_sum_ratio(const MomentumSequenceInstance& inst);

// Geometric-series tail bounds:
//   sum_{q<Q} a^q sqrt(q+1) <= (1/(1-a))(1 + sqrt(pi)/(2 sqrt(-ln a)))
//                           <= 2/(1-a)^{3/2}
//   sum_{q<Q} a^q sqrt(q)(q+1) <= 4a/(1-a)^{5/2}.
struct GeometricTailReport {
  double sum_sqrt;          // brute-force partial sum
  double bound_sqrt_tight;  // intermediate bound
  double bound_sqrt;        // 2/(1-a)^{3/2}
  double sum_32;
  double bound_32;
  bool holds;
};
GeometricTailReport geometric_tail_checks(double a, std::int64_t q_count);

// Exact closed form of sum_{q=i}^{Q} a^q q and its i = 0 tail bound
// a/(1-a)^2.
struct GeomIndexReport {
  double brute;
  double closed;
  double bound;
  bool match;    // |brute - closed| <= 1e-12 relative
  bool bounded;  // brute <= bound (checked for i = 0)
};
GeomIndexReport geom_index_closed_form(double a, std::int64_t i,
                                       std::int64_t q);

// One-coordinate descent inequality, evaluated exactly over a finite
// gradient law. With G = E[g], v = beta2 v_prev + g^2 and
// vtilde = beta2 v_prev + E[g^2]:
//   E[G g / sqrt(eps + v)]
//     >= G^2 / (2 sqrt(eps + vtilde)) - 2 R E[g^2 / (eps + v)].
struct DescentInstance {
  std::vector<std::pair<double, double>> support;  // (probability, g)
  double v_prev;   // >= 0
  double beta2;    // (0, 1]
  double epsilon;  // > 0
  double r_bound;  // requires |g| <= R - sqrt(eps) atomwise
};
InequalityCheck check_descent_lemma(const DescentInstance& inst);

}  // namespace adaconv
