#include "adaconv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "adaconv/bounds.hpp"
#include "adaconv/enumeration.hpp"
#include "adaconv/lemma_checks.hpp"
#include "adaconv/objectives.hpp"
#include "adaconv/rng.hpp"

namespace adaconv {

namespace {

using json = nlohmann::ordered_json;

double uniform(RngStream& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.next_double();
}

std::int64_t uniform_int(RngStream& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng.next_u64() %
                                        static_cast<std::uint64_t>(hi - lo + 1));
}

struct SuiteStats {
  std::int64_t instances = 0;
  std::int64_t failures = 0;
  double max_slack = -std::numeric_limits<double>::infinity();

  // slack > 0 means the inequality was violated by that much.
  void record(double slack, bool holds) {
    ++instances;
    if (!holds) ++failures;
    max_slack = std::max(max_slack, slack);
  }
  json to_json() const {
    return {{"instances", instances},
            {"failures", failures},
            {"max_slack", max_slack}};
  }
};

json closed_form_suite(RngStream& rng) {
  SuiteStats stats;
  for (int t = 0; t < 1000; ++t) {
    const double a = uniform(rng, 0.05, 0.99);
    const std::int64_t q = uniform_int(rng, 0, 200);
    const std::int64_t i = uniform_int(rng, 0, q);
    const auto rep = geom_index_closed_form(a, i, q);
    const double scale = std::max({std::abs(rep.brute), std::abs(rep.closed), 1.0});
    stats.record(std::abs(rep.brute - rep.closed) / scale,
                 rep.match && rep.bounded);
  }
  return stats.to_json();
}

json sum_ratio_suite(RngStream& rng) {
  SuiteStats stats;
  for (int t = 0; t < 10000; ++t) {
    SequenceInstance inst;
    inst.a.resize(uniform_int(rng, 1, 100));
    for (double& a : inst.a) a = uniform(rng, 0.0, 10.0);
    inst.beta2 = uniform(rng, 0.5, 1.0);
    inst.epsilon = uniform(rng, 1e-8, 1.0);
    const auto c = check_sum_ratio(inst);
    stats.record(c.lhs - c.rhs, c.holds);
  }
  return stats.to_json();
}

json momentum_sum_ratio_suite(RngStream& rng) {
  SuiteStats stats;
  for (int t = 0; t < 10000; ++t) {
    MomentumSequenceInstance inst;
    inst.a.resize(uniform_int(rng, 1, 100));
    for (double& a : inst.a) a = uniform(rng, -10.0, 10.0);
    inst.beta2 = uniform(rng, 0.5, 1.0);
    inst.beta1 = uniform(rng, 1e-6, inst.beta2 * (1.0 - 1e-9));
    inst.epsilon = uniform(rng, 1e-8, 1.0);
    const auto c = check_momentum_sum_ratio(inst);
    stats.record(c.lhs - c.rhs, c.holds);
  }
  return stats.to_json();
}

json geometric_tail_suite() {
  SuiteStats stats;
  for (double a = 0.1; a < 0.995; a += 0.01) {
    const auto rep = geometric_tail_checks(a, 10000);
    const double slack = std::max(rep.sum_sqrt - rep.bound_sqrt_tight,
                                  rep.sum_32 - rep.bound_32);
    stats.record(slack, rep.holds);
  }
  return stats.to_json();
}

json descent_suite(RngStream& rng) {
  SuiteStats stats;
  for (int t = 0; t < 100; ++t) {
    DescentInstance inst;
    inst.epsilon = uniform(rng, 1e-8, 1e-2);
    inst.r_bound = uniform(rng, 1.0, 5.0);
    inst.beta2 = uniform(rng, 0.5, 1.0);
    inst.v_prev = uniform(rng, 0.0, 10.0);
    const std::int64_t atoms = uniform_int(rng, 1, 5);
    const double cap = inst.r_bound - std::sqrt(inst.epsilon);
    std::vector<double> raw(atoms);
    double total = 0.0;
    for (double& p : raw) {
      p = uniform(rng, 0.1, 1.0);
      total += p;
    }
    for (std::int64_t a = 0; a < atoms; ++a) {
      inst.support.push_back({raw[a] / total, uniform(rng, -cap, cap)});
    }
    const auto c = check_descent_lemma(inst);
    stats.record(c.rhs - c.lhs, c.holds);
  }
  return stats.to_json();
}

FiniteSupportObjective default_two_atom() {
  FiniteSupportObjective::Atom up{0.5, {{{1.0, 1.0}}}};
  FiniteSupportObjective::Atom down{0.5, {{{0.6, -1.0}}}};
  return FiniteSupportObjective({up, down});
}

// Enumeration-level checks: the momentum descent lemma, the SGD descent
// lemma and the momentum-norm bound E||m_n||^2 <= (R^2+sigma^2)/(1-beta1)^2,
// all evaluated exactly on a two-atom instance.
json enumeration_suite() {
  const auto obj = default_two_atom();
  json out;

  SuiteStats adaptive;
  for (const auto& [b1, b2] : std::vector<std::pair<double, double>>{
           {0.0, 1.0}, {0.0, 0.999}, {0.5, 1.0}, {0.5, 0.999}, {0.9, 0.999}}) {
    const HyperParams h(0.1, b1, b2, 1e-8);
    const auto rep =
        exact_trajectory_expectations(obj, h, Algorithm::adaptive, 6, {}, 6);
    for (const auto& c : rep.descent) {
      adaptive.record(c.rhs - c.lhs, c.holds);
    }
  }
  out["adaptive_descent"] = adaptive.to_json();

  SuiteStats sgd_descent;
  SuiteStats momentum_norm;
  const double moment =
      obj.sgd_grad_norm_sq_bound() + obj.sgd_variance_bound();
  for (double b1 : {0.0, 0.5, 0.9}) {
    const HyperParams h(0.1, b1, 1.0, 1e-8);
    const auto rep =
        exact_trajectory_expectations(obj, h, Algorithm::sgd_hb, 8);
    for (const auto& c : rep.descent) {
      sgd_descent.record(c.rhs - c.lhs, c.holds);
    }
    const double cap = moment / ((1.0 - b1) * (1.0 - b1));
    for (double msq : rep.momentum_sq) {
      momentum_norm.record(msq - cap, msq <= cap + kIneqSlack);
    }
  }
  out["sgd_descent"] = sgd_descent.to_json();
  out["momentum_norm"] = momentum_norm.to_json();
  return out;
}

bool all_pass(const json& suites) {
  for (const auto& [name, s] : suites.items()) {
    if (s.contains("failures")) {
      if (s["failures"].get<std::int64_t>() != 0) return false;
    } else if (!all_pass(s)) {
      return false;
    }
  }
  return true;
}

const char* theorem_name(TheoremId t) {
  switch (t) {
    case TheoremId::adagrad:
      return "adagrad";
    case TheoremId::adam:
      return "adam";
    case TheoremId::adagrad_momentum:
      return "adagrad_momentum";
    case TheoremId::adam_momentum:
      return "adam_momentum";
    case TheoremId::sgd:
      return "sgd";
  }
  return "?";
}

bool applicable(TheoremId t, double b1, double b2) {
  switch (t) {
    case TheoremId::adagrad:
      return b1 == 0.0 && b2 == 1.0;
    case TheoremId::adam:
      return b1 == 0.0 && b2 < 1.0;
    case TheoremId::adagrad_momentum:
      return b2 == 1.0;
    case TheoremId::adam_momentum:
      return b2 < 1.0 && b1 < b2;
    case TheoremId::sgd:
      return true;
  }
  return false;
}

}  // namespace

VerifyOutcome verify_lemmas(std::uint64_t seed) {
  RngStream rng(seed);
  json suites;
  suites["geom_index_closed_form"] = closed_form_suite(rng);
  suites["sum_ratio"] = sum_ratio_suite(rng);
  suites["momentum_sum_ratio"] = momentum_sum_ratio_suite(rng);
  suites["geometric_tails"] = geometric_tail_suite();
  suites["descent"] = descent_suite(rng);
  suites["enumeration"] = enumeration_suite();
  const bool passed = all_pass(suites);
  json report;
  report["passed"] = passed;
  report["seed"] = seed;
  report["prng"] = RngStream::kName;
  report["suites"] = std::move(suites);
  return {passed, report.dump(2) + "\n"};
}

VerifyOutcome verify_bounds(const std::string& config_json) {
  std::vector<FiniteSupportObjective::Atom> atoms;
  std::int64_t n = 8;
  double epsilon = 1e-8;
  std::vector<double> alphas{1e-2, 1e-1, 1.0};
  std::vector<double> beta1s{0.0, 0.5, 0.9};
  std::vector<double> beta2s{0.95, 0.999, 1.0};
  if (!config_json.empty()) {
    json j = json::parse(config_json);
    for (const auto& [key, value] : j.items()) {
      if (key == "objective") {
        for (const auto& ja : value.at("atoms")) {
          FiniteSupportObjective::Atom atom;
          atom.prob = ja.at("prob").get<double>();
          for (const auto& jc : ja.at("terms")) {
            std::vector<HuberTerm> coord;
            for (const auto& jt : jc) {
              coord.push_back({jt.at("weight").get<double>(),
                               jt.at("center").get<double>()});
            }
            atom.terms.push_back(std::move(coord));
          }
          atoms.push_back(std::move(atom));
        }
      } else if (key == "iterations") {
        n = value.get<std::int64_t>();
      } else if (key == "epsilon") {
        epsilon = value.get<double>();
      } else if (key == "alphas") {
        alphas = value.get<std::vector<double>>();
      } else if (key == "beta1s") {
        beta1s = value.get<std::vector<double>>();
      } else if (key == "beta2s") {
        beta2s = value.get<std::vector<double>>();
      } else {
        throw std::invalid_argument("unknown key '" + key +
                                    "' in bounds config");
      }
    }
  }
  const FiniteSupportObjective obj =
      atoms.empty() ? default_two_atom() : FiniteSupportObjective(atoms);

  json points = json::array();
  std::int64_t checked = 0, skipped = 0, violations = 0;
  for (TheoremId theorem :
       {TheoremId::adagrad, TheoremId::adam, TheoremId::adagrad_momentum,
        TheoremId::adam_momentum, TheoremId::sgd}) {
    for (double a : alphas) {
      for (double b1 : beta1s) {
        for (double b2 : beta2s) {
          if (!applicable(theorem, b1, b2)) continue;
          const HyperParams h(a, b1, b2, epsilon);
          const auto c = check_theorem_bound(obj, h, theorem, n);
          json jp;
          jp["theorem"] = theorem_name(theorem);
          jp["alpha"] = a;
          jp["beta1"] = b1;
          jp["beta2"] = b2;
          jp["exact_lhs"] = c.exact_lhs;
          jp["bound_rhs"] = c.bound_rhs;
          jp["valid"] = c.valid;
          jp["holds"] = c.holds;
          points.push_back(std::move(jp));
          if (!c.valid) {
            ++skipped;
          } else {
            ++checked;
            if (!c.holds) ++violations;
          }
        }
      }
    }
  }
  json report;
  report["passed"] = violations == 0;
  report["iterations"] = n;
  report["checked"] = checked;
  report["skipped_invalid_horizon"] = skipped;
  report["violations"] = violations;
  report["points"] = std::move(points);
  return {violations == 0, report.dump(2) + "\n"};
}

std::string eval_bounds(const std::string& inputs_json) {
  json j = json::parse(inputs_json);
  BoundInputs in{};
  double ref_c = 0.0;
  bool has_ref_c = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "d") {
      in.d = value.get<std::int64_t>();
    } else if (key == "r_bound") {
      in.r_bound = value.get<double>();
    } else if (key == "smoothness") {
      in.smoothness = value.get<double>();
    } else if (key == "f0_minus_fstar") {
      in.f0_minus_fstar = value.get<double>();
    } else if (key == "epsilon") {
      in.epsilon = value.get<double>();
    } else if (key == "n") {
      in.n = value.get<std::int64_t>();
    } else if (key == "alpha") {
      in.alpha = value.get<double>();
    } else if (key == "beta1") {
      in.beta1 = value.get<double>();
    } else if (key == "beta2") {
      in.beta2 = value.get<double>();
    } else if (key == "sigma") {
      in.sigma = value.get<double>();
    } else if (key == "ref_c") {
      ref_c = value.get<double>();
      has_ref_c = true;
    } else {
      throw std::invalid_argument("unknown key '" + key + "' in bound inputs");
    }
  }
  auto breakdown = [](const BoundValue& b) {
    return json{{"term_init", b.term_init},
                {"term_log", b.term_log},
                {"total", b.total},
                {"c_coeff", b.c_coeff},
                {"valid", b.valid}};
  };
  json out;
  out["inputs"] = j;
  if (in.beta1 == 0.0 && in.beta2 == 1.0) {
    out["adagrad"] = breakdown(adagrad_bound(in));
  }
  if (in.beta1 == 0.0 && in.beta2 < 1.0) {
    out["adam"] = breakdown(adam_bound(in));
  }
  if (in.beta2 == 1.0) {
    out["adagrad_momentum"] = breakdown(adagrad_momentum_bound(in));
  }
  if (in.beta2 < 1.0 && in.beta1 < in.beta2) {
    out["adam_momentum"] = breakdown(adam_momentum_bound(in));
  }
  if (in.beta1 < 1.0) {
    out["sgd"] = breakdown(sgd_momentum_bound(in));
  }
  if (has_ref_c) {
    out["reference_sgd"] = reference_sgd_bound(in, ref_c);
  }
  return out.dump(2) + "\n";
}

}  // namespace adaconv
