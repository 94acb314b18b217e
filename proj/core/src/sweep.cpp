#include "adaconv/sweep.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "adaconv/rng.hpp"
#include "adaconv/tau.hpp"

namespace adaconv {

namespace {

using json = nlohmann::ordered_json;

constexpr std::uint64_t kWarmSeedSpace = 0xffffffff00000000ull;

std::vector<double> default_grid() {
  std::vector<double> g(13);
  for (int i = 0; i < 13; ++i) {
    g[i] = std::pow(10.0, -6.0 + 6.0 * i / 12.0);
  }
  return g;
}

std::vector<WarmPhase> default_warm() {
  return {{1'000'000, 1e-4}, {1'000'000, 1e-5}};
}

void apply_vary_defaults(SweepConfig& cfg) {
  switch (cfg.vary) {
    case Vary::alpha:
      cfg.fixed_beta1 = 0.0;
      cfg.fixed_beta2 = 1.0 - 1e-6;
      cfg.warm_start = default_warm();
      break;
    case Vary::one_minus_beta1:
      cfg.fixed_alpha = 1e-5;
      cfg.fixed_beta2 = 1.0 - 1e-6;
      cfg.warm_start.clear();
      break;
    case Vary::one_minus_beta2:
      cfg.fixed_alpha = 1e-6;
      cfg.fixed_beta1 = 0.0;
      cfg.warm_start = default_warm();
      break;
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> keys,
                    const char* where) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* k : keys) {
      if (key == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument(std::string("unknown key '") + key +
                                  "' in " + where);
    }
  }
}

ObjectiveSpec parse_objective(const json& j) {
  ObjectiveSpec spec;
  if (j.is_string()) {
    if (j.get<std::string>() != "toy") {
      throw std::invalid_argument("objective must be \"toy\" or an atom list");
    }
    return spec;
  }
  if (!j.is_object()) {
    throw std::invalid_argument("objective must be \"toy\" or an atom list");
  }
  reject_unknown(j, {"atoms"}, "objective");
  spec.toy = false;
  for (const auto& ja : j.at("atoms")) {
    reject_unknown(ja, {"prob", "terms"}, "objective.atoms[]");
    FiniteSupportObjective::Atom atom;
    atom.prob = ja.at("prob").get<double>();
    for (const auto& jc : ja.at("terms")) {
      std::vector<HuberTerm> coord;
      for (const auto& jt : jc) {
        reject_unknown(jt, {"weight", "center"}, "objective.atoms[].terms[]");
        coord.push_back({jt.at("weight").get<double>(),
                         jt.at("center").get<double>()});
      }
      atom.terms.push_back(std::move(coord));
    }
    spec.atoms.push_back(std::move(atom));
  }
  // Constructing validates probabilities, dimensions and boundedness.
  FiniteSupportObjective probe(spec.atoms);
  return spec;
}

json objective_to_json(const ObjectiveSpec& spec) {
  if (spec.toy) return json("toy");
  json atoms = json::array();
  for (const auto& a : spec.atoms) {
    json terms = json::array();
    for (const auto& coord : a.terms) {
      json jc = json::array();
      for (const auto& t : coord) {
        jc.push_back({{"weight", t.weight}, {"center", t.center}});
      }
      terms.push_back(std::move(jc));
    }
    atoms.push_back({{"prob", a.prob}, {"terms", std::move(terms)}});
  }
  return json{{"atoms", std::move(atoms)}};
}

std::unique_ptr<StochasticObjective> make_objective(const ObjectiveSpec& spec) {
  if (spec.toy) return std::make_unique<ToyProblem>();
  return std::make_unique<FiniteSupportObjective>(spec.atoms);
}

void validate(const SweepConfig& cfg) {
  if (cfg.grid.empty()) throw std::invalid_argument("grid must be non-empty");
  for (double x : cfg.grid) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("grid values must be positive and finite");
    }
    if (cfg.vary != Vary::alpha && x > 1.0) {
      throw std::invalid_argument("1 - beta grids must stay within (0, 1]");
    }
  }
  if (cfg.iterations < 1) {
    throw std::invalid_argument("iterations must be >= 1");
  }
  if (cfg.runs < 1) throw std::invalid_argument("runs must be >= 1");
  for (const auto& p : cfg.warm_start) {
    if (p.iterations < 1 || !(p.alpha > 0.0)) {
      throw std::invalid_argument("warm phases need iterations >= 1, alpha > 0");
    }
  }
  // Checks the fixed hyper-parameters at every grid point up front.
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    hyperparams_at(cfg, cfg.grid[i]);
  }
}

std::string double_str(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, p};
}

}  // namespace

HyperParams hyperparams_at(const SweepConfig& cfg, double x) {
  double a = cfg.fixed_alpha;
  double b1 = cfg.fixed_beta1;
  double b2 = cfg.fixed_beta2;
  switch (cfg.vary) {
    case Vary::alpha:
      a = x;
      break;
    case Vary::one_minus_beta1:
      b1 = 1.0 - x;
      break;
    case Vary::one_minus_beta2:
      b2 = 1.0 - x;
      break;
  }
  // Grid edges: x = 1 gives beta2 = 0 (clamped to the smallest positive
  // double, which does not change the dynamics) and x = 1e-6 can collide
  // beta1 with beta2 = 1 - 1e-6 (nudged one ulp down).
  if (b2 <= 0.0) b2 = std::numeric_limits<double>::min();
  if (b1 >= b2) b1 = std::nextafter(b2, 0.0);
  return {a, b1, b2, cfg.epsilon};
}

SweepConfig parse_config(const std::string& json_text) {
  json j = json::parse(json_text);
  if (!j.is_object()) throw std::invalid_argument("config must be an object");
  reject_unknown(j,
                 {"vary", "objective", "grid", "fixed", "iterations", "runs",
                  "master_seed", "warm_start", "estimator"},
                 "config");
  SweepConfig cfg;
  const std::string vary = j.at("vary").get<std::string>();
  if (vary == "alpha") {
    cfg.vary = Vary::alpha;
  } else if (vary == "one_minus_beta1") {
    cfg.vary = Vary::one_minus_beta1;
  } else if (vary == "one_minus_beta2") {
    cfg.vary = Vary::one_minus_beta2;
  } else {
    throw std::invalid_argument("vary must be alpha|one_minus_beta1|one_minus_beta2");
  }
  apply_vary_defaults(cfg);
  cfg.grid = default_grid();

  if (j.contains("objective")) cfg.objective = parse_objective(j["objective"]);
  if (j.contains("grid")) cfg.grid = j["grid"].get<std::vector<double>>();
  if (j.contains("fixed")) {
    const json& f = j["fixed"];
    reject_unknown(f, {"alpha", "beta1", "beta2", "epsilon"}, "fixed");
    if (f.contains("alpha")) cfg.fixed_alpha = f["alpha"].get<double>();
    if (f.contains("beta1")) cfg.fixed_beta1 = f["beta1"].get<double>();
    if (f.contains("beta2")) cfg.fixed_beta2 = f["beta2"].get<double>();
    if (f.contains("epsilon")) cfg.epsilon = f["epsilon"].get<double>();
  }
  if (j.contains("iterations")) {
    cfg.iterations = j["iterations"].get<std::int64_t>();
  }
  if (j.contains("runs")) cfg.runs = j["runs"].get<int>();
  if (j.contains("master_seed")) {
    cfg.master_seed = j["master_seed"].get<std::uint64_t>();
  }
  if (j.contains("warm_start")) {
    cfg.warm_start.clear();
    for (const auto& jp : j["warm_start"]) {
      reject_unknown(jp, {"iterations", "alpha"}, "warm_start[]");
      cfg.warm_start.push_back({jp.at("iterations").get<std::int64_t>(),
                                jp.at("alpha").get<double>()});
    }
  }
  if (j.contains("estimator")) {
    const std::string e = j["estimator"].get<std::string>();
    if (e == "tau_weighted") {
      cfg.estimator = Estimator::tau_weighted;
    } else if (e == "plain_average") {
      cfg.estimator = Estimator::plain_average;
    } else {
      throw std::invalid_argument("estimator must be tau_weighted|plain_average");
    }
  }
  validate(cfg);
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const SweepConfig& cfg) {
  json j;
  switch (cfg.vary) {
    case Vary::alpha:
      j["vary"] = "alpha";
      break;
    case Vary::one_minus_beta1:
      j["vary"] = "one_minus_beta1";
      break;
    case Vary::one_minus_beta2:
      j["vary"] = "one_minus_beta2";
      break;
  }
  j["objective"] = objective_to_json(cfg.objective);
  j["grid"] = cfg.grid;
  j["fixed"] = {{"alpha", cfg.fixed_alpha},
                {"beta1", cfg.fixed_beta1},
                {"beta2", cfg.fixed_beta2},
                {"epsilon", cfg.epsilon}};
  j["iterations"] = cfg.iterations;
  j["runs"] = cfg.runs;
  j["master_seed"] = cfg.master_seed;
  json warm = json::array();
  for (const auto& p : cfg.warm_start) {
    warm.push_back({{"iterations", p.iterations}, {"alpha", p.alpha}});
  }
  j["warm_start"] = std::move(warm);
  j["estimator"] = cfg.estimator == Estimator::tau_weighted ? "tau_weighted"
                                                            : "plain_average";
  return j.dump(2) + "\n";
}

namespace {

// Runs n steps of the adaptive recursion in place; returns false if the
// iterate left the finite range.
bool advance_phase(const StochasticObjective& obj, const HyperParams& h,
                   std::int64_t n, RngStream& rng, std::vector<double>& x,
                   std::vector<double>& m, std::vector<double>& v) {
  const int d = obj.dim();
  std::vector<double> g(d);
  // 1 - beta2^j maintained by the stable recurrence om <- b2 om + (1 - b2).
  const double one_minus_b2 = 1.0 - h.beta2;
  double om = 0.0;
  const double base = h.alpha * (1.0 - h.beta1);
  for (std::int64_t j = 0; j < n; ++j) {
    obj.sample_grad(x, rng, g);
    om = h.beta2 * om + one_minus_b2;
    const double alpha_j =
        h.beta2 < 1.0 ? base * std::sqrt(om / one_minus_b2) : base;
    bool finite = true;
    for (int i = 0; i < d; ++i) {
      m[i] = h.beta1 * m[i] + g[i];
      v[i] = h.beta2 * v[i] + g[i] * g[i];
      x[i] -= alpha_j * m[i] / std::sqrt(h.epsilon + v[i]);
      finite = finite && std::isfinite(x[i]);
    }
    if (!finite) return false;
  }
  return true;
}

double measure(const StochasticObjective& obj, const HyperParams& h,
               std::int64_t n, RngStream& rng, std::vector<double> x,
               Estimator est) {
  const int d = obj.dim();
  std::vector<double> m(d, 0.0), v(d, 0.0), g(d), tg(d);
  const double one_minus_b2 = 1.0 - h.beta2;
  double om = 0.0;
  const double base = h.alpha * (1.0 - h.beta1);
  double sum = 0.0, ema = 0.0;
  for (std::int64_t j = 0; j < n; ++j) {
    obj.true_grad(x, tg);
    double gsq = 0.0;
    for (int i = 0; i < d; ++i) gsq += tg[i] * tg[i];
    sum += gsq;
    ema = h.beta1 * ema + gsq;

    obj.sample_grad(x, rng, g);
    om = h.beta2 * om + one_minus_b2;
    const double alpha_j =
        h.beta2 < 1.0 ? base * std::sqrt(om / one_minus_b2) : base;
    bool finite = true;
    for (int i = 0; i < d; ++i) {
      m[i] = h.beta1 * m[i] + g[i];
      v[i] = h.beta2 * v[i] + g[i] * g[i];
      x[i] -= alpha_j * m[i] / std::sqrt(h.epsilon + v[i]);
      finite = finite && std::isfinite(x[i]);
    }
    if (!finite) return std::numeric_limits<double>::quiet_NaN();
  }
  if (est == Estimator::plain_average) {
    return sum / static_cast<double>(n);
  }
  // sum_j (1 - beta1^(N-j)) gsq_j = sum - beta1 * ema_final.
  return (sum - h.beta1 * ema) / tau_normalizer(n, h.beta1);
}

}  // namespace

std::vector<std::vector<double>> compute_warm_starts(const SweepConfig& cfg) {
  std::vector<std::vector<double>> warm(cfg.runs);
  if (cfg.warm_start.empty()) return warm;
  const auto obj = make_objective(cfg.objective);
  for (int run = 0; run < cfg.runs; ++run) {
    RngStream rng(derive_seed(cfg.master_seed,
                              kWarmSeedSpace + static_cast<std::uint64_t>(run)));
    const int d = obj->dim();
    std::vector<double> x(d, 0.0), m(d, 0.0), v(d, 0.0);
    for (const auto& phase : cfg.warm_start) {
      HyperParams h(phase.alpha, cfg.fixed_beta1, kWarmBeta2, cfg.epsilon);
      if (!advance_phase(*obj, h, phase.iterations, rng, x, m, v)) break;
    }
    warm[run] = std::move(x);
  }
  return warm;
}

RunResult run_experiment(const SweepConfig& cfg, std::size_t grid_index,
                         const std::vector<std::vector<double>>& warm_x) {
  RunResult res;
  res.x = cfg.grid[grid_index];
  const auto obj = make_objective(cfg.objective);
  const HyperParams h = hyperparams_at(cfg, res.x);
  for (int run = 0; run < cfg.runs; ++run) {
    const std::uint64_t seed = derive_seed(
        cfg.master_seed, grid_index * static_cast<std::uint64_t>(cfg.runs) +
                             static_cast<std::uint64_t>(run));
    res.seeds.push_back(seed);
    RngStream rng(seed);
    std::vector<double> x0 = warm_x.empty() || warm_x[run].empty()
                                 ? std::vector<double>(obj->dim(), 0.0)
                                 : warm_x[run];
    const auto t0 = std::chrono::steady_clock::now();
    const double est = measure(*obj, h, cfg.iterations, rng, std::move(x0),
                               cfg.estimator);
    const auto t1 = std::chrono::steady_clock::now();
    res.wall_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
    res.estimates.push_back(est);
    if (!std::isfinite(est)) res.diverged = true;
  }
  double sum = 0.0;
  int count = 0;
  for (double e : res.estimates) {
    if (std::isfinite(e)) {
      sum += e;
      ++count;
    }
  }
  if (count == 0) {
    res.mean = std::numeric_limits<double>::quiet_NaN();
    res.std_error = std::numeric_limits<double>::quiet_NaN();
    res.error = "all runs diverged";
    return res;
  }
  res.mean = sum / count;
  if (count >= 2) {
    double ss = 0.0;
    for (double e : res.estimates) {
      if (std::isfinite(e)) ss += (e - res.mean) * (e - res.mean);
    }
    res.std_error = std::sqrt(ss / (count - 1)) / std::sqrt(count);
  }
  return res;
}

std::vector<RunResult> sweep(const SweepConfig& cfg, int jobs) {
  validate(cfg);
  const auto warm = compute_warm_starts(cfg);
  std::vector<RunResult> table(cfg.grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < cfg.grid.size();
         i = next.fetch_add(1)) {
      try {
        table[i] = run_experiment(cfg, i, warm);
      } catch (const std::exception& e) {
        table[i].x = cfg.grid[i];
        table[i].error = e.what();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  return table;
}

RegressionResult loglog_regress(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) {
    throw std::invalid_argument("regression needs at least two points");
  }
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw std::invalid_argument("regression points must be positive finite");
    }
    sx += std::log(x);
    sy += std::log(y);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    const double dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("regression x values coincide");
  RegressionResult r{};
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  const double ss_res = syy - r.slope * sxy;
  r.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return r;
}

void write_results(const std::vector<RunResult>& table, const SweepConfig& cfg,
                   const std::string& csv_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot write " + csv_path);
  csv << "x,y,yerr\n";
  for (const auto& row : table) {
    csv << double_str(row.x) << ',' << double_str(row.mean) << ','
        << double_str(row.std_error) << '\n';
  }
  csv.close();

  json meta;
  meta["prng"] = RngStream::kName;
  meta["master_seed"] = cfg.master_seed;
  meta["config"] = json::parse(serialize_config(cfg));
  json rows = json::array();
  for (const auto& row : table) {
    json jr;
    jr["x"] = row.x;
    jr["estimates"] = row.estimates;
    jr["mean"] = row.mean;
    jr["std_error"] = row.std_error;
    jr["seeds"] = row.seeds;
    jr["wall_seconds"] = row.wall_seconds;
    jr["diverged"] = row.diverged;
    jr["error"] = row.error;
    rows.push_back(std::move(jr));
  }
  meta["results"] = std::move(rows);
  std::ofstream side(csv_path + ".meta.json");
  if (!side) throw std::runtime_error("cannot write " + csv_path + ".meta.json");
  side << meta.dump(2) << "\n";
}

std::vector<std::array<double, 3>> read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "x,y,yerr") {
    throw std::invalid_argument("expected header x,y,yerr in " + path);
  }
  std::vector<std::array<double, 3>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 3> row{};
    std::stringstream ss(line);
    std::string cell;
    for (int i = 0; i < 3; ++i) {
      if (!std::getline(ss, cell, ',')) {
        throw std::invalid_argument("malformed CSV row: " + line);
      }
      row[i] = std::stod(cell);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace adaconv
