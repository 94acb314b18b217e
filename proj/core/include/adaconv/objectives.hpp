#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "adaconv/rng.hpp"

namespace adaconv {

struct HuberEval {
  double value;
  double derivative;
};

// y^2/2 for |y| <= 1, |y| - 1/2 otherwise. C^1 at |y| = 1.
inline HuberEval huber(double y) {
  const double a = y < 0 ? -y : y;
  if (a <= 1.0) return {0.5 * y * y, y};
  return {a - 0.5, y > 0 ? 1.0 : -1.0};
}

// A stochastic objective F(x) = E[f(x)] with an unbiased gradient sampler
// and closed-form F and grad F.
class StochasticObjective {
 public:
  virtual ~StochasticObjective() = default;

  virtual int dim() const = 0;
  // One draw of grad f(x).
  virtual void sample_grad(std::span<const double> x, RngStream& rng,
                           std::span<double> out) const = 0;
  virtual void true_grad(std::span<const double> x,
                         std::span<double> out) const = 0;
  virtual double true_value(std::span<const double> x) const = 0;
  virtual double f_star() const = 0;
  // Almost-sure l-inf bound on sampled gradient components, when one exists.
  virtual std::optional<double> grad_bound() const { return std::nullopt; }
  // Lipschitz constant of grad F (l2), when known.
  virtual std::optional<double> smoothness() const { return std::nullopt; }
};

// The six-coordinate toy objective: coordinate i pulls towards +1 with
// probability 1 - p_i and towards -1 with weight 1/sqrt(p_i) and
// probability p_i = 10^-i, so the rare-event second moment is exactly 1
// per coordinate.
class ToyProblem final : public StochasticObjective {
 public:
  static constexpr int kDim = 6;

  ToyProblem();

  int dim() const override { return kDim; }
  void sample_grad(std::span<const double> x, RngStream& rng,
                   std::span<double> out) const override;
  void true_grad(std::span<const double> x,
                 std::span<double> out) const override;
  double true_value(std::span<const double> x) const override;
  double f_star() const override { return f_star_; }

  // Heuristic: l-inf bound of the expected gradient plus the largest atom
  // weight. The sampled gradients are not a.s. bounded in any useful sense
  // here (the rare atom carries weight 1/sqrt(p_6) = 1000); this objective
  // is only used for the slope experiments, not for theorem validity runs.
  std::optional<double> grad_bound() const override;
  std::optional<double> smoothness() const override;

  double probability(int i) const { return p_[i]; }
  // Exact per-coordinate Var[grad_i f(x)] from the two-point law.
  std::array<double, kDim> variance(std::span<const double> x) const;
  std::span<const double> minimizer() const { return x_min_; }

 private:
  std::array<double, kDim> p_;
  std::array<double, kDim> sqrt_p_;
  std::array<double, kDim> x_min_;
  double f_star_;
};

struct HuberTerm {
  double weight;
  double center;
};

// A finitely supported random function: with probability atoms[a].prob,
// f(x) = sum_i sum_t w * huber(x_i - c) over atom a's terms for coordinate
// i. Exact F, grad F and problem constants follow from probability-weighted
// sums, which makes exhaustive trajectory enumeration possible.
class FiniteSupportObjective final : public StochasticObjective {
 public:
  struct Atom {
    double prob;
    // terms[i] lists the Huber terms of coordinate i.
    std::vector<std::vector<HuberTerm>> terms;
  };

  // Throws std::invalid_argument when probabilities are not strictly
  // positive and summing to 1 within 1e-12, dimensions disagree, or the
  // expected objective is unbounded below.
  explicit FiniteSupportObjective(std::vector<Atom> atoms);

  int dim() const override { return dim_; }
  void sample_grad(std::span<const double> x, RngStream& rng,
                   std::span<double> out) const override;
  void true_grad(std::span<const double> x,
                 std::span<double> out) const override;
  double true_value(std::span<const double> x) const override;
  double f_star() const override { return f_star_; }
  std::optional<double> grad_bound() const override { return grad_linf_; }
  std::optional<double> smoothness() const override { return smoothness_; }

  std::size_t atom_count() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double atom_prob(std::size_t a) const { return atoms_[a].prob; }
  void atom_grad(std::size_t a, std::span<const double> x,
                 std::span<double> out) const;
  double atom_value(std::size_t a, std::span<const double> x) const;

  // Exact sup_x |grad_i f(x)| over all atoms and coordinates.
  double grad_linf_bound() const { return grad_linf_; }
  // Exact sup_x ||grad F(x)||_2^2 (the SGD-side gradient bound R^2).
  double sgd_grad_norm_sq_bound() const { return sgd_r_sq_; }
  // Exact sup_x (E||grad f(x)||^2 - ||grad F(x)||^2) (the SGD sigma^2).
  double sgd_variance_bound() const { return sgd_sigma_sq_; }
  std::span<const double> minimizer() const { return x_min_; }

 private:
  std::vector<Atom> atoms_;
  int dim_;
  double f_star_;
  std::vector<double> x_min_;
  double grad_linf_;
  double smoothness_;
  double sgd_r_sq_;
  double sgd_sigma_sq_;
  std::vector<double> cum_prob_;
};

// The toy problem restricted to one coordinate with probability p,
// expressed as a two-atom finite-support objective.
FiniteSupportObjective toy_coordinate_as_atoms(double p);

}  // namespace adaconv
