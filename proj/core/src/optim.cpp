#include "adaconv/optim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "adaconv/objectives.hpp"

namespace adaconv {

namespace {

void check_grad(std::size_t dim, std::span<const double> grad) {
  if (grad.size() != dim) {
    throw std::invalid_argument("gradient dimension " +
                                std::to_string(grad.size()) +
                                " does not match state dimension " +
                                std::to_string(dim));
  }
  for (double g : grad) {
    if (!std::isfinite(g)) {
      throw std::invalid_argument("non-finite gradient component");
    }
  }
}

}  // namespace

HyperParams::HyperParams(double alpha, double beta1, double beta2,
                         double epsilon)
    : alpha(alpha), beta1(beta1), beta2(beta2), epsilon(epsilon) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be positive");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (!(beta1 >= 0.0) || !(beta1 < 1.0)) {
    throw std::invalid_argument("beta1 must lie in [0, 1)");
  }
  if (!(beta2 > 0.0) || !(beta2 <= 1.0)) {
    throw std::invalid_argument("beta2 must lie in (0, 1]");
  }
  if (!(beta1 < beta2)) {
    throw std::invalid_argument("beta1 < beta2 is required");
  }
}

OptimizerState OptimizerState::initial(std::span<const double> x0) {
  OptimizerState s;
  s.x.assign(x0.begin(), x0.end());
  s.m.assign(x0.size(), 0.0);
  s.v.assign(x0.size(), 0.0);
  return s;
}

SgdState SgdState::initial(std::span<const double> x0) {
  SgdState s;
  s.x.assign(x0.begin(), x0.end());
  s.m.assign(x0.size(), 0.0);
  return s;
}

double step_size(const HyperParams& h, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("step index must be >= 1");
  const double base = h.alpha * (1.0 - h.beta1);
  if (h.beta2 == 1.0) return base;
  // (1 - beta2^n) / (1 - beta2), stable for beta2 near 1.
  const double ratio =
      -std::expm1(static_cast<double>(n) * std::log(h.beta2)) /
      (1.0 - h.beta2);
  return base * std::sqrt(ratio);
}

void advance_adaptive(OptimizerState& state, const HyperParams& h,
                      std::span<const double> grad) {
  check_grad(state.dim(), grad);
  state.n += 1;
  const double a_n = step_size(h, state.n);
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const double g = grad[i];
    state.m[i] = h.beta1 * state.m[i] + g;
    state.v[i] = h.beta2 * state.v[i] + g * g;
    state.x[i] -= a_n * state.m[i] / std::sqrt(h.epsilon + state.v[i]);
  }
}

void advance_sgd(SgdState& state, double alpha, double beta1,
                 std::span<const double> grad) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(beta1 >= 0.0) || !(beta1 < 1.0)) {
    throw std::invalid_argument("beta1 must lie in [0, 1)");
  }
  check_grad(state.dim(), grad);
  state.n += 1;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    state.m[i] = beta1 * state.m[i] + grad[i];
    state.x[i] -= alpha * state.m[i];
  }
}

OptimizerState adaptive_step(const OptimizerState& state, const HyperParams& h,
                             std::span<const double> grad) {
  OptimizerState next = state;
  advance_adaptive(next, h, grad);
  return next;
}

SgdState sgd_hb_step(const SgdState& state, double alpha, double beta1,
                     std::span<const double> grad) {
  SgdState next = state;
  advance_sgd(next, alpha, beta1, grad);
  return next;
}

TrajectoryRecord run_trajectory(const StochasticObjective& obj,
                                const HyperParams& h, Algorithm algorithm,
                                std::int64_t n_steps, RngStream& rng,
                                std::span<const double> x0) {
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  const int d = obj.dim();
  std::vector<double> start(x0.begin(), x0.end());
  if (start.empty()) start.assign(d, 0.0);
  if (static_cast<int>(start.size()) != d) {
    throw std::invalid_argument("x0 dimension mismatch");
  }

  TrajectoryRecord rec;
  rec.grad_sq.reserve(n_steps);
  std::vector<double> g(d), exact(d);

  auto record_grad = [&](std::span<const double> x) {
    obj.true_grad(x, exact);
    double s = 0.0;
    for (double c : exact) s += c * c;
    rec.grad_sq.push_back(s);
  };

  if (algorithm == Algorithm::adaptive) {
    OptimizerState s = OptimizerState::initial(start);
    for (std::int64_t j = 0; j < n_steps; ++j) {
      record_grad(s.x);
      obj.sample_grad(s.x, rng, g);
      advance_adaptive(s, h, g);
    }
    rec.final_state = std::move(s);
  } else {
    SgdState s = SgdState::initial(start);
    for (std::int64_t j = 0; j < n_steps; ++j) {
      record_grad(s.x);
      obj.sample_grad(s.x, rng, g);
      advance_sgd(s, h.alpha, h.beta1, g);
    }
    rec.final_state = std::move(s);
  }
  return rec;
}

}  // namespace adaconv
