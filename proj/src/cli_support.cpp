#include "pathuq/cli_support.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pathuq/errors.hpp"
#include "pathuq/lq_control.hpp"
#include "pathuq/mc.hpp"
#include "pathuq/relent.hpp"

namespace pathuq::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kScenarios = {
    "bm-cdf", "bm-mean", "nonrev", "lq-control", "queue", "vasicek",
    "rate-drop"};

[[noreturn]] void config_error(const std::string& what) {
  raise(ErrorKind::invalid_argument, what);
}

// ---------------------------------------------------------------- TOML ----

// Minimal TOML reader covering the config schema: [tables], scalar values
// (number, bool, "string"), and (nested) arrays; '#' comments.  Arrays may
// span lines; brackets inside strings are respected.
struct TomlCursor {
  const std::string& text;
  size_t pos = 0;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void skip_ws() {
    while (!done() && (text[pos] == ' ' || text[pos] == '\t' ||
                       text[pos] == '\r' || text[pos] == '\n')) {
      ++pos;
    }
  }
};

json parse_toml_value(TomlCursor& cur);

json parse_toml_array(TomlCursor& cur) {
  json arr = json::array();
  ++cur.pos;  // consume '['
  while (true) {
    cur.skip_ws();
    if (cur.done()) config_error("unterminated array");
    if (cur.peek() == ']') {
      ++cur.pos;
      return arr;
    }
    arr.push_back(parse_toml_value(cur));
    cur.skip_ws();
    if (!cur.done() && cur.peek() == ',') ++cur.pos;
  }
}

json parse_toml_value(TomlCursor& cur) {
  cur.skip_ws();
  if (cur.done()) config_error("missing value");
  const char c = cur.peek();
  if (c == '[') return parse_toml_array(cur);
  if (c == '"') {
    ++cur.pos;
    std::string s;
    while (!cur.done() && cur.peek() != '"') s.push_back(cur.text[cur.pos++]);
    if (cur.done()) config_error("unterminated string");
    ++cur.pos;
    return json(s);
  }
  // Bare token: bool or number.
  std::string tok;
  while (!cur.done() && cur.peek() != ',' && cur.peek() != ']' &&
         cur.peek() != '\n' && cur.peek() != '#' && cur.peek() != '\r') {
    tok.push_back(cur.text[cur.pos++]);
  }
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t')) tok.pop_back();
  if (tok == "true") return json(true);
  if (tok == "false") return json(false);
  try {
    size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) config_error("bad number: '" + tok + "'");
    return json(v);
  } catch (const std::exception&) {
    config_error("cannot parse value: '" + tok + "'");
  }
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

}  // namespace

json parse_toml(const std::string& text) {
  json root = json::object();
  json* table = &root;
  std::istringstream stream(text);
  std::string raw;
  std::string pending;  // accumulates multi-line array values
  std::string pending_key;
  int bracket_depth = 0;

  auto finish_pair = [&](const std::string& key, const std::string& value) {
    TomlCursor cur{value, 0};
    (*table)[key] = parse_toml_value(cur);
    cur.skip_ws();
    if (!cur.done()) config_error("trailing content after value for '" + key + "'");
  };

  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    std::string line = strip_comment(raw);
    if (bracket_depth > 0) {
      pending += "\n" + line;
      for (char c : line) {
        if (c == '[') ++bracket_depth;
        if (c == ']') --bracket_depth;
      }
      if (bracket_depth == 0) finish_pair(pending_key, pending);
      continue;
    }
    // Trim.
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        config_error("bad table header at line " + std::to_string(line_no));
      const std::string name = line.substr(1, line.size() - 2);
      if (name.empty()) config_error("empty table name");
      table = &root[name];
      if (table->is_null()) *table = json::object();
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      config_error("expected key = value at line " + std::to_string(line_no));
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    std::string value = line.substr(eq + 1);

    int depth = 0;
    for (char c : value) {
      if (c == '[') ++depth;
      if (c == ']') --depth;
    }
    if (depth > 0) {
      pending = value;
      pending_key = key;
      bracket_depth = depth;
      continue;
    }
    finish_pair(key, value);
  }
  if (bracket_depth > 0) config_error("unterminated array at end of file");
  return root;
}

json parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const size_t first = text.find_first_not_of(" \t\r\n");
  const bool looks_json =
      path.size() > 5 && path.substr(path.size() - 5) == ".json";
  if (looks_json || (first != std::string::npos && text[first] == '{')) {
    try {
      return json::parse(text);
    } catch (const std::exception& e) {
      config_error(std::string("bad JSON config: ") + e.what());
    }
  }
  return parse_toml(text);
}

bool known_scenario(const std::string& id) {
  for (const auto& s : kScenarios)
    if (s == id) return true;
  return false;
}

const std::vector<std::string>& scenario_ids() { return kScenarios; }

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) config_error("grid count must be >= 1");
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

double get_num(const json& cfg, const std::string& key) {
  const auto it = cfg.find(key);
  if (it == cfg.end() || !it->is_number())
    config_error("missing or non-numeric config field '" + key + "'");
  return it->get<double>();
}

bool get_flag(const json& cfg, const std::string& key) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return false;
  if (it->is_boolean()) return it->get<bool>();
  if (it->is_number()) return it->get<double>() != 0.0;
  config_error("field '" + key + "' must be boolean");
}

// Either an explicit array `<key>_grid` or `<key>_min/_max/_count`.
std::vector<double> get_grid(const json& cfg, const std::string& key) {
  const auto arr = cfg.find(key + "_grid");
  if (arr != cfg.end()) {
    if (!arr->is_array() || arr->empty())
      config_error("'" + key + "_grid' must be a nonempty array");
    std::vector<double> v;
    for (const auto& x : *arr) {
      if (!x.is_number()) config_error("grid entries must be numbers");
      v.push_back(x.get<double>());
    }
    return v;
  }
  return linspace(get_num(cfg, key + "_min"), get_num(cfg, key + "_max"),
                  static_cast<int>(get_num(cfg, key + "_count")));
}

}  // namespace

json default_config(const std::string& scenario) {
  json cfg = json::object();
  if (scenario == "bm-cdf") {
    cfg["mu"] = 1.0;
    cfg["a"] = 2.0;
    cfg["alpha"] = 0.2;
    cfg["t_min"] = 0.16;
    cfg["t_max"] = 8.0;
    cfg["t_count"] = 50;
  } else if (scenario == "bm-mean") {
    cfg["mu"] = 1.0;
    cfg["a"] = 2.0;
    cfg["alpha"] = 0.2;
  } else if (scenario == "nonrev") {
    cfg["c_min"] = 0.0;
    cfg["c_max"] = 2.0;
    cfg["c_count"] = 11;
  } else if (scenario == "lq-control") {
    cfg["alpha"] = 0.5;
    cfg["kappa_min"] = 1.0;
    cfg["kappa_max"] = 6.0;
    cfg["kappa_count"] = 11;
    cfg["B"] = json::array({json::array({2.0, 0.1}), json::array({0.1, -1.0})});
  } else if (scenario == "queue") {
    cfg["alpha"] = 1.0;
    cfg["rho"] = 1.0;
    cfg["delta_grid"] = json::array({0.01, 0.02, 0.05, 0.1, 0.2, 0.3});
    cfg["epsilon_grid"] = json::array({0.01, 0.02, 0.05, 0.1, 0.2, 0.3});
  } else if (scenario == "vasicek") {
    cfg["r"] = 1.25;
    cfg["sigma"] = 4.0;
    cfg["gamma"] = 2.0;
    cfg["sigma_tilde"] = 1.0;
    cfg["K"] = 1.0;
    cfg["L"] = 0.5;
    cfg["X0"] = 2.0;
    cfg["sweep_grid"] = json::array({1e-3, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0});
    cfg["sweep_variable"] = "sigma_tilde";
  } else if (scenario == "rate-drop") {
    cfg["r"] = 2.0;
    cfg["sigma"] = 3.0;
    cfg["K"] = 1.0;
    cfg["L"] = 0.5;
    cfg["X0"] = 2.0;
    cfg["dr_plus"] = 0.3;
    cfg["tf_min"] = 0.0;
    cfg["tf_max"] = 10.0;
    cfg["tf_count"] = 21;
    cfg["kappa_optimize"] = false;
  } else {
    config_error("unknown scenario '" + scenario + "'");
  }
  return cfg;
}

scen::CurveTable run_scenario(const RunManifest& manifest) {
  const json& cfg = manifest.config;
  const std::string& id = manifest.scenario;
  const int threads = std::max(1, manifest.threads);

  if (id == "bm-cdf") {
    return scen::bm_cdf_bounds(get_num(cfg, "mu"), get_num(cfg, "a"),
                               get_num(cfg, "alpha"), get_grid(cfg, "t"));
  }
  if (id == "bm-mean") {
    return scen::bm_mean_bounds(get_num(cfg, "mu"), get_num(cfg, "a"),
                                get_num(cfg, "alpha"));
  }
  if (id == "nonrev") {
    return scen::nonrev_bounds(get_grid(cfg, "c"), threads);
  }
  if (id == "lq-control") {
    std::array<double, 4> drift{2.0, 0.1, 0.1, -1.0};
    const auto b = cfg.find("B");
    if (b != cfg.end()) {
      if (!b->is_array() || b->size() != 2 || !(*b)[0].is_array() ||
          (*b)[0].size() != 2 || (*b)[1].size() != 2)
        config_error("'B' must be a 2x2 row-major nested array");
      drift = {(*b)[0][0].get<double>(), (*b)[0][1].get<double>(),
               (*b)[1][0].get<double>(), (*b)[1][1].get<double>()};
    }
    return scen::lq_bounds(get_grid(cfg, "kappa"), get_num(cfg, "alpha"),
                           threads, drift);
  }
  if (id == "queue") {
    auto scalar_or_grid = [&](const std::string& key) -> std::vector<double> {
      if (cfg.contains(key) && cfg[key].is_number())
        return {cfg[key].get<double>()};
      return get_grid(cfg, key);
    };
    return scen::queue_bounds(get_num(cfg, "alpha"), get_num(cfg, "rho"),
                              scalar_or_grid("delta"),
                              scalar_or_grid("epsilon"));
  }
  if (id == "vasicek") {
    scen::VasicekConfig v;
    v.rate = get_num(cfg, "r");
    v.vol_asset = get_num(cfg, "sigma");
    v.mean_reversion = get_num(cfg, "gamma");
    v.vol_rate = get_num(cfg, "sigma_tilde");
    v.strike = get_num(cfg, "K");
    v.exercise_level = get_num(cfg, "L");
    v.spot = get_num(cfg, "X0");
    v.sweep = get_grid(cfg, "sweep");
    const std::string var = cfg.value("sweep_variable", "sigma_tilde");
    if (var == "sigma_tilde") {
      v.sweep_vol_rate = true;
    } else if (var == "sigma") {
      v.sweep_vol_rate = false;
    } else {
      config_error("sweep_variable must be 'sigma_tilde' or 'sigma'");
    }
    v.threads = threads;
    return scen::vasicek_bounds(v);
  }
  if (id == "rate-drop") {
    scen::RateDropConfig r;
    r.rate = get_num(cfg, "r");
    r.vol_asset = get_num(cfg, "sigma");
    r.strike = get_num(cfg, "K");
    r.exercise_level = get_num(cfg, "L");
    r.spot = get_num(cfg, "X0");
    r.rate_bump = get_num(cfg, "dr_plus");
    r.tf_grid = get_grid(cfg, "tf");
    r.optimize_base_rate = get_flag(cfg, "kappa_optimize");
    r.threads = threads;
    return scen::rate_drop_bounds(r);
  }
  config_error("unknown scenario '" + id + "'");
}

std::string double_to_string(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double string_to_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    config_error("bad numeric field '" + s + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

}  // namespace

std::string curve_to_csv(const scen::CurveTable& table) {
  std::string out = "sweep,baseline,lower,upper,ref_lower,ref_upper,status\n";
  for (const auto& row : table.rows) {
    out += std::isnan(row.sweep) ? "-" : double_to_string(row.sweep);
    out += "," + double_to_string(row.baseline);
    out += "," + double_to_string(row.lower);
    out += "," + double_to_string(row.upper);
    out += ",";
    if (row.ref_lower) out += double_to_string(*row.ref_lower);
    out += ",";
    if (row.ref_upper) out += double_to_string(*row.ref_upper);
    out += "," + row.status + "\n";
  }
  return out;
}

scen::CurveTable csv_to_curve(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) ||
      split_csv_line(line) !=
          std::vector<std::string>{"sweep", "baseline", "lower", "upper",
                                   "ref_lower", "ref_upper", "status"})
    config_error("bad CSV header");
  scen::CurveTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) config_error("bad CSV row: " + line);
    scen::CurvePoint row;
    row.sweep = (f[0] == "-") ? std::numeric_limits<double>::quiet_NaN()
                              : string_to_double(f[0]);
    row.baseline = string_to_double(f[1]);
    row.lower = string_to_double(f[2]);
    row.upper = string_to_double(f[3]);
    if (!f[4].empty()) row.ref_lower = string_to_double(f[4]);
    if (!f[5].empty()) row.ref_upper = string_to_double(f[5]);
    row.status = f[6];
    table.rows.push_back(row);
  }
  return table;
}

json run_sidecar(const RunManifest& manifest, const scen::CurveTable& table,
                 double elapsed_ms) {
  json side;
  side["scenario"] = manifest.scenario;
  side["config"] = manifest.config;
  side["seed"] = manifest.seed;
  side["threads"] = manifest.threads;
  side["version"] = kVersion;
  side["timings_ms"] = elapsed_ms;
  side["rows"] = table.rows.size();
  return side;
}

namespace {

json check_entry(const std::string& name, double lower, double upper,
                 const mc::McEstimate& est) {
  const auto rep = mc::mc_validate(lower, upper, est);
  json j;
  j["name"] = name;
  j["estimate"] = est.mean;
  j["std_error"] = est.std_error;
  j["lower"] = lower;
  j["upper"] = upper;
  j["capped_fraction"] = est.capped_fraction;
  j["note"] = rep.note;
  j["pass"] = rep.pass;
  return j;
}

mc::SimConfig sim_config(const RunManifest& manifest, double dt, double t_max,
                         std::int64_t n_paths) {
  mc::SimConfig cfg;
  cfg.n_paths = n_paths;
  cfg.dt = dt;
  cfg.t_max = t_max;
  cfg.seed = manifest.seed;
  cfg.threads = std::max(1, manifest.threads);
  const auto& c = manifest.config;
  if (c.contains("mc_paths")) cfg.n_paths = static_cast<std::int64_t>(c["mc_paths"].get<double>());
  if (c.contains("mc_dt")) cfg.dt = c["mc_dt"].get<double>();
  return cfg;
}

}  // namespace

json validate_scenario(const RunManifest& manifest) {
  const json& cfg = manifest.config;
  const std::string& id = manifest.scenario;
  json checks = json::array();

  if (id == "bm-cdf") {
    const double mu = get_num(cfg, "mu"), a = get_num(cfg, "a"),
                 alpha = get_num(cfg, "alpha");
    auto grid = get_grid(cfg, "t");
    // Subsample the grid to keep validation affordable.
    std::vector<double> probe;
    for (size_t i = 0; i < grid.size(); i += std::max<size_t>(1, grid.size() / 6))
      probe.push_back(grid[i]);
    const auto table = scen::bm_cdf_bounds(mu, a, alpha, probe);
    const auto cfg_mc = sim_config(manifest, 1e-3, 2.0 * probe.back() + 20.0, 20000);
    for (double sign : {+1.0, -1.0}) {
      const auto sample = mc::sample_bm_hitting(
          mu, [=](double, double) { return sign * alpha; }, a, cfg_mc);
      for (size_t i = 0; i < probe.size(); ++i) {
        double hits = 0.0;
        for (size_t p = 0; p < sample.times.size(); ++p)
          if (sample.hit[p] && sample.times[p] <= probe[i]) hits += 1.0;
        mc::McEstimate est;
        est.mean = hits / static_cast<double>(sample.times.size());
        est.std_error = std::sqrt(est.mean * (1.0 - est.mean) /
                                  static_cast<double>(sample.times.size()));
        est.capped_fraction = sample.capped_fraction;
        est.n_effective = static_cast<std::int64_t>(sample.times.size());
        checks.push_back(check_entry(
            "cdf T=" + double_to_string(probe[i]) +
                (sign > 0 ? " drift +alpha" : " drift -alpha"),
            table.rows[i].lower, table.rows[i].upper, est));
      }
    }
  } else if (id == "bm-mean") {
    const double mu = get_num(cfg, "mu"), a = get_num(cfg, "a"),
                 alpha = get_num(cfg, "alpha");
    const auto row = scen::bm_mean_bounds(mu, a, alpha).rows.at(0);
    const auto cfg_mc = sim_config(manifest, 1e-3, 80.0 / std::abs(mu), 20000);
    for (double sign : {+1.0, -1.0}) {
      const auto sample = mc::sample_bm_hitting(
          mu, [=](double, double) { return sign * alpha * (mu > 0 ? 1.0 : -1.0); },
          a, cfg_mc);
      auto est = mc::summarize(sample.times, sample.capped_fraction);
      // First-crossing discretization bias allowance.
      est.std_error += std::sqrt(cfg_mc.dt);
      checks.push_back(check_entry(
          sign > 0 ? "mean drift +alpha" : "mean drift -alpha", row.lower,
          row.upper, est));
    }
  } else if (id == "lq-control") {
    const double alpha = get_num(cfg, "alpha");
    const double kappa = 2.0;
    lqg::LqProblem prob;
    prob.drift = Eigen::MatrixXd(2, 2);
    prob.drift << 2.0, 0.1, 0.1, -1.0;
    prob.control = Eigen::MatrixXd(2, 1);
    prob.control << kappa, 0.0;
    prob.state_cost = Eigen::MatrixXd::Identity(2, 2);
    prob.control_cost = Eigen::MatrixXd::Identity(1, 1);
    prob.discount = 0.5;
    prob.init_cov = Eigen::MatrixXd::Zero(2, 2);
    prob.noise = Eigen::MatrixXd::Identity(2, 2);
    const auto iv = lqg::control_cost_bound(prob, alpha);
    const auto ric = lqg::solve_riccati(prob);
    const Eigen::MatrixXd closed_cost =
        prob.state_cost + ric.gain.transpose() * prob.control_cost * ric.gain;
    const auto cfg_mc = sim_config(manifest, 2e-3, 30.0, 8000);
    const auto est = mc::lq_cost_estimate(
        ric.closed_loop, closed_cost, prob.noise, prob.init_cov, prob.discount,
        [alpha](double, const Eigen::VectorXd& x) {
          Eigen::VectorXd b(2);
          b << alpha * std::sin(x(0)), 0.0;
          return b;
        },
        cfg_mc);
    checks.push_back(
        check_entry("cost kappa=2 sinusoidal drift", iv.lower, iv.upper, est));
  } else if (id == "queue") {
    const double arrival = get_num(cfg, "alpha"), service = get_num(cfg, "rho");
    const double eps = cfg.contains("epsilon") && cfg["epsilon"].is_number()
                           ? cfg["epsilon"].get<double>()
                           : 0.05;
    const auto table = scen::queue_bounds(arrival, service, {eps}, {eps});
    auto cfg_mc = sim_config(manifest, 1e-3, 500.0, 300);
    auto perturbed = [eps, arrival, service](int x, std::mt19937_64& rng) {
      const double l = arrival + service * x;
      std::exponential_distribution<double> first(l), second(l / eps);
      return first(rng) + second(rng);
    };
    const auto est = mc::simulate_queue(arrival, service, perturbed, cfg_mc);
    const double base = arrival / service;
    checks.push_back(check_entry("time-average queue, eps=" + double_to_string(eps),
                                 base * (1.0 + table.rows[0].lower),
                                 base * (1.0 + table.rows[0].upper), est));
  } else if (id == "vasicek") {
    scen::VasicekConfig v;
    v.rate = get_num(cfg, "r");
    v.vol_asset = get_num(cfg, "sigma");
    v.mean_reversion = get_num(cfg, "gamma");
    v.vol_rate = get_num(cfg, "sigma_tilde");
    const double sweep_value = get_grid(cfg, "sweep").back();
    v.strike = get_num(cfg, "K");
    v.exercise_level = get_num(cfg, "L");
    v.spot = get_num(cfg, "X0");
    v.sweep = {sweep_value};
    v.threads = manifest.threads;
    const auto table = scen::vasicek_bounds(v);
    mc::VasicekModel model;
    model.rate = v.rate;
    model.vol_asset = v.vol_asset;
    model.mean_reversion = v.mean_reversion;
    model.vol_rate = v.sweep_vol_rate ? sweep_value : v.vol_rate;
    model.strike = v.strike;
    model.exercise_level = v.exercise_level;
    model.spot = v.spot;
    const auto cfg_mc = sim_config(manifest, 1e-4, 30.0, 100000);
    const auto est = mc::vasicek_conditional_value(model, cfg_mc);
    checks.push_back(check_entry(
        "conditional value at sweep=" + double_to_string(sweep_value),
        table.rows[0].lower, table.rows[0].upper, est));
  } else if (id == "rate-drop") {
    scen::RateDropConfig r;
    r.rate = get_num(cfg, "r");
    r.vol_asset = get_num(cfg, "sigma");
    r.strike = get_num(cfg, "K");
    r.exercise_level = get_num(cfg, "L");
    r.spot = get_num(cfg, "X0");
    r.rate_bump = get_num(cfg, "dr_plus");
    const double t_f = get_grid(cfg, "tf").back();
    r.tf_grid = {t_f};
    const auto table = scen::rate_drop_bounds(r);
    const auto cfg_mc = sim_config(manifest, 1e-4, 40.0, 50000);
    const auto est = mc::rate_drop_value(r.rate, r.vol_asset, r.strike,
                                         r.exercise_level, r.spot, r.rate_bump,
                                         t_f, cfg_mc);
    checks.push_back(check_entry("value at t_f=" + double_to_string(t_f),
                                 table.rows[0].lower, table.rows[0].upper,
                                 est));
  } else if (id == "nonrev") {
    const auto grid = get_grid(cfg, "c");
    const double c_pert = grid.back();
    const auto table = scen::nonrev_bounds({c_pert}, manifest.threads);
    auto cfg_mc = sim_config(manifest, 1e-3, 400.0, 24);
    const auto est = mc::nonrev_time_average(c_pert, cfg_mc);
    checks.push_back(check_entry("time-average |x|^2 at C=" + double_to_string(c_pert),
                                 table.rows[0].lower, table.rows[0].upper, est));
  } else {
    config_error("unknown scenario '" + id + "'");
  }

  bool all_pass = true;
  for (const auto& c : checks)
    if (!c["pass"].get<bool>()) all_pass = false;
  json report;
  report["scenario"] = id;
  report["seed"] = manifest.seed;
  report["version"] = kVersion;
  report["checks"] = checks;
  report["pass"] = all_pass;
  return report;
}

}  // namespace pathuq::cli
