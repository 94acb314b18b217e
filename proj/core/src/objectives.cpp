#include "adaconv/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace adaconv {

ToyProblem::ToyProblem() {
  f_star_ = 0.0;
  for (int i = 0; i < kDim; ++i) {
    p_[i] = std::pow(10.0, -(i + 1));
    sqrt_p_[i] = std::sqrt(p_[i]);
    // Per-coordinate expectation (1-p) huber(x-1) + sqrt(p) huber(x+1) is
    // convex with its minimum on [0, 2], where the second term is linear.
    x_min_[i] = 1.0 - sqrt_p_[i] / (1.0 - p_[i]);
    f_star_ += (1.0 - p_[i]) * huber(x_min_[i] - 1.0).value +
               sqrt_p_[i] * huber(x_min_[i] + 1.0).value;
  }
}

void ToyProblem::sample_grad(std::span<const double> x, RngStream& rng,
                             std::span<double> out) const {
  for (int i = 0; i < kDim; ++i) {
    const bool rare = rng.next_double() < p_[i];
    out[i] = rare ? huber(x[i] + 1.0).derivative / sqrt_p_[i]
                  : huber(x[i] - 1.0).derivative;
  }
}

void ToyProblem::true_grad(std::span<const double> x,
                           std::span<double> out) const {
  for (int i = 0; i < kDim; ++i) {
    out[i] = (1.0 - p_[i]) * huber(x[i] - 1.0).derivative +
             sqrt_p_[i] * huber(x[i] + 1.0).derivative;
  }
}

double ToyProblem::true_value(std::span<const double> x) const {
  double total = 0.0;
  for (int i = 0; i < kDim; ++i) {
    total += (1.0 - p_[i]) * huber(x[i] - 1.0).value +
             sqrt_p_[i] * huber(x[i] + 1.0).value;
  }
  return total;
}

std::optional<double> ToyProblem::grad_bound() const {
  double expected = 0.0;
  double largest_atom = 0.0;
  for (int i = 0; i < kDim; ++i) {
    expected = std::max(expected, (1.0 - p_[i]) + sqrt_p_[i]);
    largest_atom = std::max(largest_atom, 1.0 / sqrt_p_[i]);
  }
  return expected + largest_atom;
}

std::optional<double> ToyProblem::smoothness() const {
  // grad_i F is piecewise linear with slopes sqrt(p) on (-2, 0) and 1 - p
  // on (0, 2); the Hessian is diagonal.
  double l = 0.0;
  for (int i = 0; i < kDim; ++i) {
    l = std::max(l, std::max(1.0 - p_[i], sqrt_p_[i]));
  }
  return l;
}

std::array<double, ToyProblem::kDim> ToyProblem::variance(
    std::span<const double> x) const {
  std::array<double, kDim> out;
  for (int i = 0; i < kDim; ++i) {
    const double a = huber(x[i] - 1.0).derivative;
    const double b = huber(x[i] + 1.0).derivative;
    const double mean = (1.0 - p_[i]) * a + sqrt_p_[i] * b;
    const double second = (1.0 - p_[i]) * a * a + b * b;
    out[i] = second - mean * mean;
  }
  return out;
}

namespace {

double clamp_unit(double y) { return y < -1.0 ? -1.0 : (y > 1.0 ? 1.0 : y); }

double atom_slope(const std::vector<HuberTerm>& terms, double x) {
  double s = 0.0;
  for (const auto& t : terms) s += t.weight * clamp_unit(x - t.center);
  return s;
}

double atom_coord_value(const std::vector<HuberTerm>& terms, double x) {
  double s = 0.0;
  for (const auto& t : terms) s += t.weight * huber(x - t.center).value;
  return s;
}

double signed_weight_sum(const std::vector<HuberTerm>& terms) {
  double s = 0.0;
  for (const auto& t : terms) s += t.weight;
  return s;
}

}  // namespace

FiniteSupportObjective::FiniteSupportObjective(std::vector<Atom> atoms)
    : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("no atoms");
  dim_ = static_cast<int>(atoms_.front().terms.size());
  if (dim_ < 1) throw std::invalid_argument("atoms must have >= 1 coordinate");

  double prob_sum = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.prob > 0.0)) {
      throw std::invalid_argument("atom probabilities must be positive");
    }
    if (static_cast<int>(a.terms.size()) != dim_) {
      throw std::invalid_argument("atom dimension mismatch");
    }
    for (const auto& coord : a.terms) {
      for (const auto& t : coord) {
        if (!std::isfinite(t.weight) || !std::isfinite(t.center)) {
          throw std::invalid_argument("non-finite Huber term");
        }
      }
    }
    prob_sum += a.prob;
  }
  if (std::abs(prob_sum - 1.0) > 1e-12) {
    throw std::invalid_argument("atom probabilities must sum to 1");
  }

  cum_prob_.reserve(atoms_.size());
  double c = 0.0;
  for (const auto& a : atoms_) {
    c += a.prob;
    cum_prob_.push_back(c);
  }
  cum_prob_.back() = 1.0;

  // Per-coordinate exact analysis. Everything below is piecewise
  // linear/quadratic with kinks only at the Huber breakpoints c +- 1, so
  // sups and minima are attained at breakpoints, segment roots, or tails.
  f_star_ = 0.0;
  x_min_.assign(dim_, 0.0);
  grad_linf_ = 0.0;
  smoothness_ = 0.0;
  sgd_r_sq_ = 0.0;
  sgd_sigma_sq_ = 0.0;

  for (int i = 0; i < dim_; ++i) {
    std::vector<double> pts;
    for (const auto& a : atoms_) {
      for (const auto& t : a.terms[i]) {
        pts.push_back(t.center - 1.0);
        pts.push_back(t.center + 1.0);
      }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.empty()) pts.push_back(0.0);

    const auto expected_slope = [&](double x) {
      double s = 0.0;
      for (const auto& a : atoms_) s += a.prob * atom_slope(a.terms[i], x);
      return s;
    };
    const auto expected_value = [&](double x) {
      double s = 0.0;
      for (const auto& a : atoms_) {
        s += a.prob * atom_coord_value(a.terms[i], x);
      }
      return s;
    };

    // Tail slope of E f along coordinate i; F unbounded below if negative.
    double tail = 0.0;
    for (const auto& a : atoms_) {
      tail += a.prob * signed_weight_sum(a.terms[i]);
    }
    if (tail < 0.0) {
      throw std::invalid_argument("objective unbounded below");
    }

    // a.s. l-inf gradient bound: max of |atom slope| over breakpoints and
    // tail limits.
    for (const auto& a : atoms_) {
      const double w = std::abs(signed_weight_sum(a.terms[i]));
      grad_linf_ = std::max(grad_linf_, w);
      for (double x : pts) {
        grad_linf_ = std::max(grad_linf_, std::abs(atom_slope(a.terms[i], x)));
      }
    }

    // sup ||grad F||^2 and sup Var, coordinate-separable. The per-interval
    // variance is a convex quadratic, so breakpoints and tails suffice.
    double max_g_sq = tail * tail;
    double max_var = 0.0;
    {
      // Tail variance (slopes are constant beyond the last breakpoint).
      for (int side = 0; side < 2; ++side) {
        double mean = 0.0, second = 0.0;
        for (const auto& a : atoms_) {
          const double s = (side == 0 ? -1.0 : 1.0) *
                           signed_weight_sum(a.terms[i]);
          mean += a.prob * s;
          second += a.prob * s * s;
        }
        max_var = std::max(max_var, second - mean * mean);
      }
      for (double x : pts) {
        const double g = expected_slope(x);
        max_g_sq = std::max(max_g_sq, g * g);
        double second = 0.0;
        for (const auto& a : atoms_) {
          const double s = atom_slope(a.terms[i], x);
          second += a.prob * s * s;
        }
        max_var = std::max(max_var, second - g * g);
      }
    }
    sgd_r_sq_ += max_g_sq;
    sgd_sigma_sq_ += max_var;

    // Minimum of E f along coordinate i: breakpoints plus segment roots of
    // the piecewise linear derivative.
    std::vector<double> candidates = pts;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const double hl = expected_slope(pts[k]);
      const double hr = expected_slope(pts[k + 1]);
      if ((hl < 0.0 && hr > 0.0) || (hl > 0.0 && hr < 0.0)) {
        candidates.push_back(pts[k] +
                             (pts[k + 1] - pts[k]) * hl / (hl - hr));
      }
    }
    double best_x = candidates.front();
    double best_v = expected_value(best_x);
    for (double x : candidates) {
      const double v = expected_value(x);
      if (v < best_v) {
        best_v = v;
        best_x = x;
      }
    }
    x_min_[i] = best_x;
    f_star_ += best_v;

    // Smoothness: curvature of E f is piecewise constant; probe segment
    // midpoints.
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const double mid = 0.5 * (pts[k] + pts[k + 1]);
      double curv = 0.0;
      for (const auto& a : atoms_) {
        for (const auto& t : a.terms[i]) {
          if (std::abs(mid - t.center) < 1.0) curv += a.prob * t.weight;
        }
      }
      smoothness_ = std::max(smoothness_, std::abs(curv));
    }
  }
}

void FiniteSupportObjective::sample_grad(std::span<const double> x,
                                         RngStream& rng,
                                         std::span<double> out) const {
  const double u = rng.next_double();
  const auto it = std::upper_bound(cum_prob_.begin(), cum_prob_.end(), u);
  const std::size_t a =
      std::min<std::size_t>(it - cum_prob_.begin(), atoms_.size() - 1);
  atom_grad(a, x, out);
}

void FiniteSupportObjective::true_grad(std::span<const double> x,
                                       std::span<double> out) const {
  for (int i = 0; i < dim_; ++i) {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.prob * atom_slope(a.terms[i], x[i]);
    out[i] = s;
  }
}

double FiniteSupportObjective::true_value(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    total += atoms_[a].prob * atom_value(a, x);
  }
  return total;
}

void FiniteSupportObjective::atom_grad(std::size_t a,
                                       std::span<const double> x,
                                       std::span<double> out) const {
  for (int i = 0; i < dim_; ++i) {
    out[i] = atom_slope(atoms_[a].terms[i], x[i]);
  }
}

double FiniteSupportObjective::atom_value(std::size_t a,
                                          std::span<const double> x) const {
  double total = 0.0;
  for (int i = 0; i < dim_; ++i) {
    total += atom_coord_value(atoms_[a].terms[i], x[i]);
  }
  return total;
}

FiniteSupportObjective toy_coordinate_as_atoms(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("p must lie in (0, 1)");
  }
  std::vector<FiniteSupportObjective::Atom> atoms;
  atoms.push_back({1.0 - p, {{{1.0, 1.0}}}});
  atoms.push_back({p, {{{1.0 / std::sqrt(p), -1.0}}}});
  return FiniteSupportObjective(std::move(atoms));
}

}  // namespace adaconv
