#include "qst/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "qst/error.hpp"
#include "qst/estimators.hpp"
#include "qst/rng.hpp"
#include "qst/serialize.hpp"

namespace qst {

namespace {

constexpr std::uint64_t kStateTag = 0x5354415445ULL;  // "STATE"
constexpr std::uint64_t kDataTag = 0x44415441ULL;     // "DATA"

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
T parse_number(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (in.fail() || !in.eof()) throw ConfigError("config '" + key + "': cannot parse '" + text + "'");
  return v;
}

void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  try {
    if (key == "basis") cfg.basis = value;
    else if (key == "state") cfg.state = value;
    else if (key == "model") cfg.model = parse_model(value);
    else if (key == "n_grid") cfg.n_grid = parse_n_grid(value);
    else if (key == "trials") cfg.trials = parse_number<int>(value, key);
    else if (key == "estimators") cfg.estimators = split(value, ',');
    else if (key == "eps") {
      if (value == "auto") cfg.eps.reset();
      else cfg.eps = parse_number<double>(value, key);
    } else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(value, key);
    else if (key == "threads") cfg.threads = parse_number<int>(value, key);
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "timing") cfg.timing = value == "true" || value == "1" || value == "yes";
    else if (key == "max_iters") cfg.max_iters = parse_number<int>(value, key);
    else throw ConfigError("unknown config key '" + key + "'");
  } catch (const ArgumentError& e) {
    throw ConfigError("config '" + key + "': " + e.what());
  }
}

struct StatePlan {
  enum class Kind { kRank, kPower, kMixed, kFixed } kind = Kind::kRank;
  std::size_t rank = 1;
  double p = 1.0;
  double d = 1.0;
  std::optional<DensityMatrix> fixed;
};

StatePlan plan_state(const std::string& spec, std::size_t m) {
  StatePlan plan;
  const auto parts = split(spec, ':');
  try {
    if (parts[0] == "rank") {
      if (parts.size() != 2) throw ConfigError("state '" + spec + "': expected rank:<r>");
      plan.kind = StatePlan::Kind::kRank;
      plan.rank = parse_number<std::size_t>(parts[1], "state");
      if (plan.rank < 1 || plan.rank > m) throw ConfigError("state '" + spec + "': rank outside [1, m]");
    } else if (parts[0] == "power") {
      if (parts.size() != 3) throw ConfigError("state '" + spec + "': expected power:<p>:<d>");
      plan.kind = StatePlan::Kind::kPower;
      plan.p = parse_number<double>(parts[1], "state");
      plan.d = parse_number<double>(parts[2], "state");
      power_law_state(m, plan.p, plan.d, 0);  // parameter check only
    } else if (parts[0] == "mixed") {
      plan.kind = StatePlan::Kind::kMixed;
    } else {
      plan.kind = StatePlan::Kind::kFixed;
      plan.fixed = density_from_json(read_json_file(spec));
      if (plan.fixed->dim() != m) throw ConfigError("state file '" + spec + "': dimension != basis dimension");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("state: ") + e.what());
  }
  return plan;
}

DensityMatrix draw_state(const StatePlan& plan, std::size_t m, std::uint64_t seed) {
  switch (plan.kind) {
    case StatePlan::Kind::kRank: return haar_random_state(m, plan.rank, seed);
    case StatePlan::Kind::kPower: return power_law_state(m, plan.p, plan.d, seed);
    case StatePlan::Kind::kMixed: return DensityMatrix::maximally_mixed(m);
    case StatePlan::Kind::kFixed: break;
  }
  return *plan.fixed;
}

double median(std::vector<double> v) {
  const std::size_t k = v.size();
  std::sort(v.begin(), v.end());
  return k % 2 == 1 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

double noise_scale(const NoiseModel& model, double u) {
  if (const auto* g = std::get_if<Gaussian>(&model)) return g->sigma_xi;
  if (const auto* b = std::get_if<BoundedBinary>(&model)) return b->u_bar;
  return u;
}

std::string group_key(const ExperimentRow& row, const std::vector<std::string>& fields) {
  std::string key;
  for (const auto& f : fields) {
    if (!key.empty()) key += ",";
    if (f == "estimator") key += "estimator=" + row.estimator;
    else if (f == "r") key += "r=" + std::to_string(row.r);
    else if (f == "m") key += "m=" + std::to_string(row.m);
    else throw ArgumentError("group_by: unknown field '" + f + "'");
  }
  return key;
}

}  // namespace

std::vector<std::size_t> parse_n_grid(const std::string& text) {
  std::vector<std::size_t> out;
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const auto lo = parse_number<std::size_t>(parts[0], "n_grid");
    const auto hi = parse_number<std::size_t>(parts[1], "n_grid");
    const std::string& step = parts[2];
    if (step.size() < 2 || (step[0] != 'x' && step[0] != '+')) {
      throw ArgumentError("n_grid '" + text + "': step must be x<k> or +<k>");
    }
    const auto k = parse_number<std::size_t>(step.substr(1), "n_grid");
    if (lo < 1 || (step[0] == 'x' && k < 2) || (step[0] == '+' && k < 1)) {
      throw ArgumentError("n_grid '" + text + "': degenerate range");
    }
    for (std::size_t n = lo; n <= hi; n = step[0] == 'x' ? n * k : n + k) out.push_back(n);
  } else if (parts.size() == 1) {
    for (const auto& item : split(text, ',')) out.push_back(parse_number<std::size_t>(item, "n_grid"));
  } else {
    throw ArgumentError("n_grid '" + text + "': expected a:b:x<k>, a:b:+<k> or a comma list");
  }
  if (out.empty()) throw ArgumentError("n_grid '" + text + "' is empty");
  return out;
}

void ExperimentConfig::validate() const {
  if (n_grid.empty()) throw ConfigError("n_grid must not be empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw ConfigError("n_grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ConfigError("n_grid must be strictly increasing");
  }
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (estimators.empty()) throw ConfigError("estimators must not be empty");
  std::set<std::string> seen;
  for (const auto& e : estimators) {
    if (e != "ls" && e != "mls" && e != "vn") throw ConfigError("unknown estimator '" + e + "'");
    if (!seen.insert(e).second) throw ConfigError("estimator '" + e + "' listed twice");
  }
  if (eps && !(*eps > 0.0)) throw ConfigError("eps must be > 0 or auto");
  try {
    validate_model(model);
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig cfg;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    Json j;
    try {
      j = Json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("config JSON: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
      std::string v;
      if (value.is_string()) v = value.get<std::string>();
      else if (value.is_array()) {
        for (const auto& item : value) {
          if (!v.empty()) v += ",";
          v += item.is_string() ? item.get<std::string>() : item.dump();
        }
      } else v = value.dump();
      set_key(cfg, key, v);
    }
    return cfg;
  }
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

std::string config_to_text(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "basis = " << cfg.basis << "\n"
     << "state = " << cfg.state << "\n"
     << "model = " << model_to_string(cfg.model) << "\n"
     << "n_grid = ";
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) os << (i ? "," : "") << cfg.n_grid[i];
  os << "\ntrials = " << cfg.trials << "\nestimators = ";
  for (std::size_t i = 0; i < cfg.estimators.size(); ++i) os << (i ? "," : "") << cfg.estimators[i];
  os << "\neps = " << (cfg.eps ? fmt(*cfg.eps) : std::string("auto")) << "\n"
     << "seed = " << cfg.seed << "\n"
     << "max_iters = " << cfg.max_iters << "\n";
  return os.str();
}

std::vector<std::string> feasibility_warnings(const ExperimentConfig& cfg, double u, std::size_t m) {
  std::vector<std::string> out;
  const double md = static_cast<double>(m);
  const double log_m = std::log(md);
  for (std::size_t n : cfg.n_grid) {
    const double nd = static_cast<double>(n);
    const double lhs1 = std::holds_alternative<Gaussian>(cfg.model)
                            ? u * std::sqrt(md / nd) * log_m
                            : u * std::sqrt(md * log_m / nd);
    if (lhs1 > 1.0) {
      out.push_back("n = " + std::to_string(n) + ": design term " + fmt(lhs1) + " exceeds 1");
    }
    if (const auto* g = std::get_if<Gaussian>(&cfg.model)) {
      const double ln = std::log(nd);
      const double lhs2 = u * u * std::sqrt(md / nd) * std::pow(log_m, 2.5) * ln * ln * std::log(md * nd);
      if (lhs2 > g->sigma_xi) {
        out.push_back("n = " + std::to_string(n) + ": second-order term " + fmt(lhs2) +
                      " exceeds sigma_xi = " + fmt(g->sigma_xi));
      }
    }
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ObservableBasis basis = [&] {
    try {
      return load_basis(cfg.basis);
    } catch (const Error& e) {
      throw ConfigError(std::string("basis: ") + e.what());
    }
  }();
  const std::size_t m = basis.dim();
  if (m < 2) throw ConfigError("basis dimension must be >= 2");
  const StatePlan plan = plan_state(cfg.state, m);

  const bool wants_vn = std::find(cfg.estimators.begin(), cfg.estimators.end(), "vn") != cfg.estimators.end();
  if (wants_vn && !cfg.eps) {
    for (std::size_t n : cfg.n_grid) {
      if (!(epsilon_choice(cfg.model, basis.u(), m, n, 0.0) > 0.0)) {
        throw ConfigError("eps = auto resolves to 0 for this model; set eps explicitly");
      }
    }
  }
  if (const auto* b = std::get_if<BoundedBinary>(&cfg.model)) {
    if (plan.kind == StatePlan::Kind::kFixed) {
      for (double c : basis.coefficients(plan.fixed->matrix())) {
        if (std::abs(c) > b->u_bar) throw ConfigError("binary model: U_bar below |<rho, E_j>| for the fixed state");
      }
    } else if (b->u_bar < basis.u()) {
      throw ConfigError("binary model: U_bar must be >= U for randomly drawn states");
    }
  }

  ExperimentResult result;
  result.config = cfg;
  result.warnings = feasibility_warnings(cfg, basis.u(), m);

  std::vector<DensityMatrix> states;
  std::vector<std::size_t> ranks;
  for (int t = 0; t < cfg.trials; ++t) {
    states.push_back(draw_state(plan, m, derive_seed(cfg.seed, {kStateTag, static_cast<std::uint64_t>(t)})));
    ranks.push_back(plan.kind == StatePlan::Kind::kRank ? plan.rank : numerical_rank(states.back().matrix(), 1e-9));
  }

  const std::size_t cells = static_cast<std::size_t>(cfg.trials) * cfg.n_grid.size();
  const std::size_t per_cell = cfg.estimators.size();
  std::vector<ExperimentRow> rows(cells * per_cell);
  SolverConfig solver;
  solver.max_iters = cfg.max_iters;

  auto run_cell = [&](std::size_t c) {
    const int trial = static_cast<int>(c / cfg.n_grid.size());
    const std::size_t n = cfg.n_grid[c % cfg.n_grid.size()];
    const std::uint64_t cell_seed =
        derive_seed(cfg.seed, {kDataTag, static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(n)});
    const DensityMatrix& rho = states[trial];
    const Dataset data = sample_dataset(rho, basis, cfg.model, n, cell_seed);
    for (std::size_t e = 0; e < per_cell; ++e) {
      const std::string& name = cfg.estimators[e];
      ExperimentRow row;
      row.trial = trial;
      row.m = m;
      row.r = ranks[trial];
      row.n = n;
      row.estimator = name;
      row.seed = cell_seed;
      const auto start = std::chrono::steady_clock::now();
      DensityMatrix est;
      if (name == "ls") {
        est = least_squares(data, basis, solver).estimate;
      } else if (name == "mls") {
        est = modified_least_squares(data, basis);
      } else {
        row.eps = cfg.eps ? *cfg.eps : epsilon_choice(cfg.model, basis.u(), m, n, 0.0);
        est = vn_penalized(data, basis, row.eps, solver).estimate;
      }
      if (cfg.timing) {
        row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
      row.err_q1 = schatten_distance(est, rho, 1.0);
      row.err_q2 = schatten_distance(est, rho, 2.0);
      row.hellinger_sq = bures_hellinger_sq(est, rho);
      row.kl_rho_to_est = quantum_kl(rho, est);
      row.l2_pi = l2_pi_distance(est.matrix(), rho.matrix(), m);
      rows[c * per_cell + e] = std::move(row);
    }
  };

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (std::size_t c = next++; c < cells; c = next++) {
      try {
        run_cell(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const int workers = std::min<int>(cfg.threads, static_cast<int>(cells));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  result.rows = std::move(rows);
  return result;
}

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kCsvVersionLine << "\n" << kCsvHeader << "\n";
  for (const auto& r : rows) {
    out << r.trial << ',' << r.m << ',' << r.r << ',' << r.n << ',' << r.estimator << ','
        << fmt(r.eps) << ',' << fmt(r.err_q1) << ',' << fmt(r.err_q2) << ',' << fmt(r.hellinger_sq)
        << ',' << r.kl_rho_to_est.to_string() << ',' << fmt(r.l2_pi) << ',' << fmt(r.wall_seconds)
        << ',' << r.seed << '\n';
  }
}

std::vector<ExperimentRow> read_csv(std::istream& in) {
  std::vector<ExperimentRow> rows;
  std::string line;
  bool header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kCsvHeader) throw ArgumentError("results CSV: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 13) throw ArgumentError("results CSV line " + std::to_string(lineno) + ": expected 13 fields");
    try {
      ExperimentRow r;
      r.trial = std::stoi(f[0]);
      r.m = std::stoull(f[1]);
      r.r = std::stoull(f[2]);
      r.n = std::stoull(f[3]);
      r.estimator = f[4];
      r.eps = std::stod(f[5]);
      r.err_q1 = std::stod(f[6]);
      r.err_q2 = std::stod(f[7]);
      r.hellinger_sq = std::stod(f[8]);
      r.kl_rho_to_est = f[9] == "inf" ? ExtendedReal::infinite() : ExtendedReal::finite(std::stod(f[9]));
      r.l2_pi = std::stod(f[10]);
      r.wall_seconds = std::stod(f[11]);
      r.seed = std::stoull(f[12]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ArgumentError("results CSV line " + std::to_string(lineno) + ": malformed number");
    }
  }
  if (!header) throw ArgumentError("results CSV: missing header row");
  return rows;
}

double row_value(const ExperimentRow& row, const std::string& column) {
  if (column == "err_q1") return row.err_q1;
  if (column == "err_q2") return row.err_q2;
  if (column == "hellinger_sq") return row.hellinger_sq;
  if (column == "kl_rho_to_est") return row.kl_rho_to_est.as_double();
  if (column == "l2_pi") return row.l2_pi;
  if (column == "wall_seconds") return row.wall_seconds;
  throw ArgumentError("unknown error column '" + column + "'");
}

RateFitOutput fit_rate(const std::vector<ExperimentRow>& rows, const std::string& column,
                       const std::string& group_by) {
  const auto fields = split(group_by, ',');
  std::map<std::string, std::map<std::size_t, std::vector<double>>> groups;
  for (const auto& r : rows) groups[group_key(r, fields)][r.n].push_back(row_value(r, column));

  RateFitOutput out;
  for (const auto& [key, by_n] : groups) {
    if (by_n.size() < 3) {
      out.notes.push_back(key + ": fewer than 3 distinct n values, skipped");
      continue;
    }
    std::vector<double> xs;
    std::vector<double> ys;
    bool degenerate = false;
    for (const auto& [n, values] : by_n) {
      const double med = median(values);
      if (!(med > 0.0) || !std::isfinite(med)) {
        degenerate = true;
        break;
      }
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(std::log(med));
    }
    if (degenerate) {
      out.notes.push_back(key + ": zero or infinite median, skipped");
      continue;
    }
    const double k = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    RateFit fit;
    fit.group = key;
    fit.points = xs.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double res = ys[i] - fit.intercept - fit.slope * xs[i];
      ssr += res * res;
    }
    fit.stderr_slope = std::sqrt(ssr / (k - 2.0) / sxx);
    out.fits.push_back(fit);
  }
  return out;
}

TheoryComparison compare_to_theory(const ExperimentResult& result, RateKind kind, double q) {
  std::string column;
  if (kind == RateKind::kHellinger) column = "hellinger_sq";
  else if (kind == RateKind::kKl) column = "kl_rho_to_est";
  else if (q == 1.0) column = "err_q1";
  else if (q == 2.0) column = "err_q2";
  else throw ArgumentError("compare_to_theory: only q = 1 and q = 2 are recorded");

  const double u = load_basis(result.config.basis).u();
  const double scale = noise_scale(result.config.model, u);

  std::map<std::string, std::map<std::size_t, std::vector<double>>> groups;
  std::map<std::string, std::pair<std::size_t, double>> shape;  // m, r
  for (const auto& r : result.rows) {
    const std::string key = group_key(r, {"estimator", "r"});
    groups[key][r.n].push_back(row_value(r, column));
    shape[key] = {r.m, static_cast<double>(r.r)};
  }

  TheoryComparison out;
  for (const auto& [key, by_n] : groups) {
    double lo = kInfinity;
    double hi = 0.0;
    for (const auto& [n, values] : by_n) {
      TheoryComparisonRow row;
      row.group = key;
      row.n = n;
      row.empirical_median = median(values);
      const RateParams params{shape[key].first, shape[key].second, static_cast<double>(n), scale};
      row.theory_rate = upper_rate(kind, q, params);
      const bool capped = kind == RateKind::kHellinger && row.theory_rate >= 2.0;
      row.ratio = capped || !std::isfinite(row.empirical_median) ? std::nan("")
                                                                  : row.empirical_median / row.theory_rate;
      if (std::isfinite(row.ratio) && row.ratio > 0.0) {
        lo = std::min(lo, row.ratio);
        hi = std::max(hi, row.ratio);
      }
      out.rows.push_back(row);
    }
    if (hi > 0.0 && hi / lo > 10.0) out.drifting_groups.push_back(key);
  }
  return out;
}

}  // namespace qst
