#include "adaconv/enumeration.hpp"

#include <cmath>
#include <stdexcept>

#include "adaconv/tau.hpp"

namespace adaconv {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> resolve_x0(const FiniteSupportObjective& obj,
                               std::span<const double> x0) {
  if (x0.empty()) return std::vector<double>(obj.dim(), 0.0);
  if (static_cast<int>(x0.size()) != obj.dim()) {
    throw std::invalid_argument("x0 dimension mismatch");
  }
  return {x0.begin(), x0.end()};
}

// Conditional expectation of sum_{j=first..last} beta2^{last-j} g_{j,i}^2
// given the trajectory prefix ending in (x, m, v), accumulated into tail.
void tail_second_moment(const FiniteSupportObjective& obj,
                        const HyperParams& h, std::span<const double> alphas,
                        std::int64_t j, std::int64_t last, double prob,
                        const std::vector<double>& x,
                        const std::vector<double>& m,
                        const std::vector<double>& v,
                        std::vector<double>& tail) {
  const int d = obj.dim();
  const double decay = std::pow(h.beta2, static_cast<double>(last - j));
  for (std::size_t a = 0; a < obj.atom_count(); ++a) {
    std::vector<double> g(d);
    obj.atom_grad(a, x, g);
    const double p = prob * obj.atom_prob(a);
    for (int i = 0; i < d; ++i) tail[i] += p * decay * g[i] * g[i];
    if (j < last) {
      std::vector<double> nx(d), nm(d), nv(d);
      for (int i = 0; i < d; ++i) {
        nm[i] = h.beta1 * m[i] + g[i];
        nv[i] = h.beta2 * v[i] + g[i] * g[i];
        nx[i] = x[i] - alphas[j - 1] * nm[i] / std::sqrt(h.epsilon + nv[i]);
      }
      tail_second_moment(obj, h, alphas, j + 1, last, p, nx, nm, nv, tail);
    }
  }
}

// E over prefixes of length n-k-1 of sum_i G_{n-k,i}^2 / sqrt(eps + vtilde),
// with vtilde_i = beta2^{k+1} v_{n-k-1,i} + E[sum beta2^{n-j} g_{j,i}^2 | prefix].
double recentered_descent_term(const FiniteSupportObjective& obj,
                               const HyperParams& h,
                               std::span<const double> alphas, std::int64_t n,
                               std::int64_t k, std::int64_t depth, double prob,
                               const std::vector<double>& x,
                               const std::vector<double>& m,
                               const std::vector<double>& v) {
  const int d = obj.dim();
  if (depth == n - k - 1) {
    std::vector<double> grad(d), tail(d, 0.0);
    obj.true_grad(x, grad);
    tail_second_moment(obj, h, alphas, n - k, n, 1.0, x, m, v, tail);
    const double decay = std::pow(h.beta2, static_cast<double>(k + 1));
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      s += grad[i] * grad[i] /
           std::sqrt(h.epsilon + decay * v[i] + tail[i]);
    }
    return prob * s;
  }
  double s = 0.0;
  for (std::size_t a = 0; a < obj.atom_count(); ++a) {
    std::vector<double> g(d), nx(d), nm(d), nv(d);
    obj.atom_grad(a, x, g);
    for (int i = 0; i < d; ++i) {
      nm[i] = h.beta1 * m[i] + g[i];
      nv[i] = h.beta2 * v[i] + g[i] * g[i];
      nx[i] = x[i] - alphas[depth] * nm[i] / std::sqrt(h.epsilon + nv[i]);
    }
    s += recentered_descent_term(obj, h, alphas, n, k, depth + 1,
                                 prob * obj.atom_prob(a), nx, nm, nv);
  }
  return s;
}

}  // namespace

EnumerationReport exact_trajectory_expectations(
    const FiniteSupportObjective& obj, const HyperParams& h,
    Algorithm algorithm, std::int64_t n_steps, std::span<const double> x0,
    int descent_check_limit) {
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  const int d = obj.dim();
  const std::size_t n_atoms = obj.atom_count();
  double path_estimate = 1.0;
  for (std::int64_t j = 0; j < n_steps; ++j) {
    path_estimate *= static_cast<double>(n_atoms);
    if (path_estimate > 1e6) {
      throw std::invalid_argument(
          "enumeration would exceed 10^6 paths; shrink N or the support");
    }
  }
  const bool adaptive = algorithm == Algorithm::adaptive;
  const std::vector<double> start = resolve_x0(obj, x0);

  std::vector<double> alphas(n_steps);
  for (std::int64_t n = 1; n <= n_steps; ++n) {
    alphas[n - 1] = adaptive ? step_size(h, n) : h.alpha;
  }

  EnumerationReport rep;
  rep.grad_sq.assign(n_steps, 0.0);
  rep.momentum_sq.assign(n_steps, 0.0);
  if (adaptive) {
    rep.update_sq.assign(n_steps, 0.0);
    rep.raw_update_sq.assign(n_steps, 0.0);
  }
  std::vector<double> descent_lhs(n_steps, 0.0);

  auto dfs = [&](auto&& self, std::int64_t depth, double prob,
                 const std::vector<double>& x, const std::vector<double>& m,
                 const std::vector<double>& v) -> void {
    std::vector<double> grad(d);
    obj.true_grad(x, grad);
    if (depth < n_steps) rep.grad_sq[depth] += prob * dot(grad, grad);
    if (depth == n_steps) {
      rep.path_count += 1;
      rep.prob_sum += prob;
      rep.expected_final_value += prob * obj.true_value(x);
      return;
    }
    for (std::size_t a = 0; a < n_atoms; ++a) {
      std::vector<double> g(d), nx(d), nm(d), nv(d);
      obj.atom_grad(a, x, g);
      const double p = prob * obj.atom_prob(a);
      double m_sq = 0.0, u_sq = 0.0, cap_u_sq = 0.0, lhs = 0.0;
      for (int i = 0; i < d; ++i) {
        nm[i] = h.beta1 * m[i] + g[i];
        m_sq += nm[i] * nm[i];
        if (adaptive) {
          nv[i] = h.beta2 * v[i] + g[i] * g[i];
          const double root = std::sqrt(h.epsilon + nv[i]);
          const double u = nm[i] / root;
          const double cap_u = g[i] / root;
          u_sq += u * u;
          cap_u_sq += cap_u * cap_u;
          lhs += grad[i] * u;
          nx[i] = x[i] - alphas[depth] * u;
        } else {
          lhs += grad[i] * nm[i];
          nx[i] = x[i] - h.alpha * nm[i];
        }
      }
      rep.momentum_sq[depth] += p * m_sq;
      if (adaptive) {
        rep.update_sq[depth] += p * u_sq;
        rep.raw_update_sq[depth] += p * cap_u_sq;
      }
      descent_lhs[depth] += p * lhs;
      self(self, depth + 1, p, nx, nm, nv);
    }
  };
  dfs(dfs, 0, 1.0, start, std::vector<double>(d, 0.0),
      std::vector<double>(d, 0.0));

  const auto tau = tau_weights(n_steps, h.beta1);
  for (std::int64_t j = 0; j < n_steps; ++j) {
    rep.grad_sq_tau += tau.weights[j] * rep.grad_sq[j];
  }

  const double smooth = obj.smoothness().value();
  if (adaptive) {
    const double r = obj.grad_linf_bound() + std::sqrt(h.epsilon);
    const std::int64_t limit =
        std::min<std::int64_t>(n_steps, descent_check_limit);
    for (std::int64_t n = 1; n <= limit; ++n) {
      double term1 = 0.0;
      double b1_pow = 1.0;
      for (std::int64_t k = 0; k < n; ++k) {
        term1 += b1_pow * recentered_descent_term(obj, h, alphas, n, k, 0, 1.0,
                                                  start,
                                                  std::vector<double>(d, 0.0),
                                                  std::vector<double>(d, 0.0));
        b1_pow *= h.beta1;
      }
      term1 *= 0.5;

      const double alpha_n = alphas[n - 1];
      double term2 = 0.0;
      for (std::int64_t l = 1; l < n; ++l) {
        double decay_sum = 0.0;
        for (std::int64_t k = l; k < n; ++k) {
          decay_sum += std::pow(h.beta1, static_cast<double>(k)) *
                       std::sqrt(static_cast<double>(k));
        }
        term2 += rep.update_sq[n - l - 1] * decay_sum;
      }
      term2 *= alpha_n * alpha_n * smooth * smooth *
               std::sqrt(1.0 - h.beta1) / (4.0 * r);

      double term3 = 0.0;
      double ratio_pow = 1.0;
      for (std::int64_t k = 0; k < n; ++k) {
        term3 += ratio_pow * std::sqrt(static_cast<double>(k + 1)) *
                 rep.raw_update_sq[n - k - 1];
        ratio_pow *= h.beta1 / h.beta2;
      }
      term3 *= 3.0 * r / std::sqrt(1.0 - h.beta1);

      const double rhs = term1 - term2 - term3;
      const double lhs = descent_lhs[n - 1];
      rep.descent.push_back({lhs, rhs, lhs >= rhs - kIneqSlack});
    }
  } else {
    const double moment =
        obj.sgd_grad_norm_sq_bound() + obj.sgd_variance_bound();
    const double drift = h.alpha * smooth * h.beta1 * moment /
                         std::pow(1.0 - h.beta1, 3.0);
    for (std::int64_t n = 1; n <= n_steps; ++n) {
      double gsum = 0.0;
      double b1_pow = 1.0;
      for (std::int64_t k = 0; k < n; ++k) {
        gsum += b1_pow * rep.grad_sq[n - k - 1];
        b1_pow *= h.beta1;
      }
      const double rhs = gsum - drift;
      const double lhs = descent_lhs[n - 1];
      rep.descent.push_back({lhs, rhs, lhs >= rhs - kIneqSlack});
    }
  }
  return rep;
}

TheoremCheck check_theorem_bound(const FiniteSupportObjective& obj,
                                 const HyperParams& h, TheoremId theorem,
                                 std::int64_t n_steps,
                                 std::span<const double> x0) {
  switch (theorem) {
    case TheoremId::adagrad:
      if (h.beta1 != 0.0 || h.beta2 != 1.0) {
        throw std::invalid_argument(
            "the Adagrad theorem requires beta1 = 0, beta2 = 1");
      }
      break;
    case TheoremId::adam:
      if (h.beta1 != 0.0 || h.beta2 >= 1.0) {
        throw std::invalid_argument(
            "the Adam theorem requires beta1 = 0, beta2 < 1");
      }
      break;
    case TheoremId::adagrad_momentum:
      if (h.beta2 != 1.0) {
        throw std::invalid_argument(
            "the Adagrad momentum theorem requires beta2 = 1");
      }
      break;
    case TheoremId::adam_momentum:
      if (h.beta2 >= 1.0) {
        throw std::invalid_argument(
            "the Adam momentum theorem requires beta2 < 1");
      }
      break;
    case TheoremId::sgd:
      break;
  }
  const bool is_sgd = theorem == TheoremId::sgd;
  const auto rep = exact_trajectory_expectations(
      obj, h, is_sgd ? Algorithm::sgd_hb : Algorithm::adaptive, n_steps, x0,
      /*descent_check_limit=*/0);

  const std::vector<double> start = resolve_x0(obj, x0);
  BoundInputs in{};
  in.d = obj.dim();
  in.smoothness = obj.smoothness().value();
  in.f0_minus_fstar = obj.true_value(start) - obj.f_star();
  in.epsilon = h.epsilon;
  in.n = n_steps;
  in.alpha = h.alpha;
  in.beta1 = h.beta1;
  in.beta2 = h.beta2;
  if (is_sgd) {
    in.r_bound = std::sqrt(obj.sgd_grad_norm_sq_bound());
    in.sigma = std::sqrt(obj.sgd_variance_bound());
  } else {
    in.r_bound = obj.grad_linf_bound() + std::sqrt(h.epsilon);
    in.sigma = 0.0;
  }

  BoundValue bound{};
  switch (theorem) {
    case TheoremId::adagrad:
      bound = adagrad_bound(in);
      break;
    case TheoremId::adam:
      bound = adam_bound(in);
      break;
    case TheoremId::adagrad_momentum:
      bound = adagrad_momentum_bound(in);
      break;
    case TheoremId::adam_momentum:
      bound = adam_momentum_bound(in);
      break;
    case TheoremId::sgd:
      bound = sgd_momentum_bound(in);
      break;
  }

  TheoremCheck check{};
  check.exact_lhs = rep.grad_sq_tau;
  check.bound_rhs = bound.total;
  check.valid = bound.valid;
  check.holds = !bound.valid || check.exact_lhs <= bound.total + kIneqSlack;
  check.inputs = in;
  return check;
}

}  // namespace adaconv
