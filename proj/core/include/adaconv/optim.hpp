#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "adaconv/rng.hpp"

namespace adaconv {

class StochasticObjective;

// Hyper-parameters of the unified adaptive recursion
//   m_n = beta1 * m_{n-1} + g_n
//   v_n = beta2 * v_{n-1} + g_n^2
//   x_n = x_{n-1} - alpha_n * m_n / sqrt(epsilon + v_n)
// beta2 = 1 gives Adagrad (constant alpha_n), beta2 < 1 the Adam-like
// schedule alpha_n = alpha * (1 - beta1) * sqrt((1 - beta2^n) / (1 - beta2)).
//
// Note this is not textbook Adam: the 1 - beta1^n bias correction of the
// momentum buffer is deliberately dropped (it would make alpha_n
// non-monotonic); for beta1 = 0.9 the two schedules differ only over the
// first ~50 iterations.
struct HyperParams {
  double alpha;
  double beta1;
  double beta2;
  double epsilon;

  // Requires alpha > 0, epsilon > 0 and 0 <= beta1 < beta2 <= 1
  // (beta1 == beta2 is rejected). Throws std::invalid_argument.
  HyperParams(double alpha, double beta1, double beta2,
              double epsilon = 1e-8);
};

struct OptimizerState {
  std::int64_t n = 0;
  std::vector<double> x;
  std::vector<double> m;
  std::vector<double> v;

  static OptimizerState initial(std::span<const double> x0);
  std::size_t dim() const { return x.size(); }
};

// Heavy-ball SGD: m_n = beta1 m_{n-1} + g_n, x_n = x_{n-1} - alpha m_n.
struct SgdState {
  std::int64_t n = 0;
  std::vector<double> x;
  std::vector<double> m;

  static SgdState initial(std::span<const double> x0);
  std::size_t dim() const { return x.size(); }
};

// alpha_n for step n >= 1. Non-decreasing in n.
double step_size(const HyperParams& h, std::int64_t n);

// In-place updates for hot loops. The gradient must be finite and of
// matching dimension.
void advance_adaptive(OptimizerState& state, const HyperParams& h,
                      std::span<const double> grad);
void advance_sgd(SgdState& state, double alpha, double beta1,
                 std::span<const double> grad);

// Pure single-step variants; the input state is left untouched.
OptimizerState adaptive_step(const OptimizerState& state, const HyperParams& h,
                             std::span<const double> grad);
SgdState sgd_hb_step(const SgdState& state, double alpha, double beta1,
                     std::span<const double> grad);

enum class Algorithm { adaptive, sgd_hb };

struct TrajectoryRecord {
  // ||grad F(x_j)||^2 for j = 0..N-1, evaluated at the pre-step iterates.
  std::vector<double> grad_sq;
  std::variant<OptimizerState, SgdState> final_state;
};

// Runs n_steps steps against the objective's gradient sampler, starting from
// x0 (zeros when empty). For sgd_hb, h.alpha and h.beta1 are used as the
// plain step size and momentum (no (1 - beta1) scaling, matching the
// heavy-ball recursion above). Deterministic for a fixed rng stream.
TrajectoryRecord run_trajectory(const StochasticObjective& obj,
                                const HyperParams& h, Algorithm algorithm,
                                std::int64_t n_steps, RngStream& rng,
                                std::span<const double> x0 = {});

}  // namespace adaconv
