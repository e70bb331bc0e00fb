/*
 Copyright 2026 The metaoc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "metaoc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "metaoc/chart.hpp"
#include "metaoc/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace metaoc {

SystemBounds ExperimentConfig::bounds() const {
  SystemBounds b;
  b.kappa_A = kappa_A;
  b.kappa_B = kappa_B;
  b.kappa_w = kappa_w;
  b.kappa = effective_kappa();
  b.gamma = gamma;
  b.G = G;
  b.beta = beta;
  b.S = S;
  return b;
}

double ExperimentConfig::effective_kappa() const {
  if (kappa > 0.0) return kappa;
  return std::sqrt(static_cast<double>(n) * static_cast<double>(m));
}

double ExperimentConfig::effective_d() const {
  if (d > 0.0) return d;
  return static_cast<double>(n);
}

void ExperimentConfig::validate() const {
  if (n < 1 || m < 1) throw ConfigError("config: n, m must be >= 1");
  if (N < 1) throw ConfigError("config: N must be >= 1");
  if (T < 2) throw ConfigError("config: T must be >= 2");
  for (long t : T_sweep) {
    if (t < 2) throw ConfigError("config: T_sweep entries must be >= 2");
  }
  if (seeds.empty()) throw ConfigError("config: seeds must be non-empty");
  if (methods.empty()) throw ConfigError("config: methods must be non-empty");
  for (const std::string& method : methods) {
    if (method != "non-adaptive" && method != "independent-oc" &&
        method != "moc1" && method != "moc2") {
      throw ConfigError("config: unknown method " + method);
    }
  }
  if (!(D_star > 0.0)) throw ConfigError("config: D_star must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("config: epsilon must be positive");
  if (zeta != 0.0 && !(zeta > 1.0)) {
    throw ConfigError("config: zeta must exceed 1 (or 0 for automatic)");
  }
  if (B_rule != "const-half" && B_rule != "uniform") {
    throw ConfigError("config: B_rule must be const-half or uniform");
  }
  disturbance_kind_from_string(disturbance);  // throws on unknown kinds
  bounds().validate();
}

namespace {

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(value);
  while (std::getline(is, item, ',')) {
    const auto begin = item.find_first_not_of(" \t");
    if (begin == std::string::npos) continue;
    const auto end = item.find_last_not_of(" \t");
    out.push_back(item.substr(begin, end - begin + 1));
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": " + value);
  }
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for " + key + ": " + value);
  }
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: expected key = value, got: " + line);
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "n") cfg.n = static_cast<int>(parse_long(key, value));
    else if (key == "m") cfg.m = static_cast<int>(parse_long(key, value));
    else if (key == "N") cfg.N = static_cast<int>(parse_long(key, value));
    else if (key == "T") cfg.T = parse_long(key, value);
    else if (key == "T_sweep") {
      cfg.T_sweep.clear();
      for (const std::string& item : split_list(value)) {
        cfg.T_sweep.push_back(parse_long(key, item));
      }
    } else if (key == "seeds") {
      cfg.seeds.clear();
      for (const std::string& item : split_list(value)) {
        cfg.seeds.push_back(static_cast<std::uint64_t>(parse_long(key, item)));
      }
    } else if (key == "methods") {
      cfg.methods = split_list(value);
    } else if (key == "D_star") cfg.D_star = parse_double(key, value);
    else if (key == "epsilon") cfg.epsilon = parse_double(key, value);
    else if (key == "zeta") cfg.zeta = parse_double(key, value);
    else if (key == "kappa_A") cfg.kappa_A = parse_double(key, value);
    else if (key == "kappa_B") cfg.kappa_B = parse_double(key, value);
    else if (key == "kappa_w") cfg.kappa_w = parse_double(key, value);
    else if (key == "kappa") cfg.kappa = parse_double(key, value);
    else if (key == "gamma") cfg.gamma = parse_double(key, value);
    else if (key == "G") cfg.G = parse_double(key, value);
    else if (key == "beta") cfg.beta = parse_double(key, value);
    else if (key == "S") cfg.S = parse_double(key, value);
    else if (key == "d") cfg.d = parse_double(key, value);
    else if (key == "disturbance") cfg.disturbance = value;
    else if (key == "B_rule") cfg.B_rule = value;
    else if (key == "output_dir") cfg.output_dir = value;
    else throw ConfigError("config: unknown key " + key);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

namespace {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  const size_t rows = j.size();
  const size_t cols = j.at(0).size();
  Matrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) {
      m(static_cast<long>(r), static_cast<long>(c)) = j.at(r).at(c).get<double>();
    }
  }
  return m;
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["n"] = cfg.n;
  j["m"] = cfg.m;
  j["N"] = cfg.N;
  j["T"] = cfg.T;
  j["T_sweep"] = cfg.T_sweep;
  j["seeds"] = cfg.seeds;
  j["methods"] = cfg.methods;
  j["D_star"] = cfg.D_star;
  j["epsilon"] = cfg.epsilon;
  j["zeta"] = cfg.zeta;
  j["kappa_A"] = cfg.kappa_A;
  j["kappa_B"] = cfg.kappa_B;
  j["kappa_w"] = cfg.kappa_w;
  j["kappa"] = cfg.kappa;
  j["gamma"] = cfg.gamma;
  j["G"] = cfg.G;
  j["beta"] = cfg.beta;
  j["S"] = cfg.S;
  j["d"] = cfg.d;
  j["disturbance"] = cfg.disturbance;
  j["B_rule"] = cfg.B_rule;
  j["output_dir"] = cfg.output_dir;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.n = j.at("n").get<int>();
  cfg.m = j.at("m").get<int>();
  cfg.N = j.at("N").get<int>();
  cfg.T = j.at("T").get<long>();
  cfg.T_sweep = j.at("T_sweep").get<std::vector<long>>();
  cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  cfg.methods = j.at("methods").get<std::vector<std::string>>();
  cfg.D_star = j.at("D_star").get<double>();
  cfg.epsilon = j.at("epsilon").get<double>();
  cfg.zeta = j.at("zeta").get<double>();
  cfg.kappa_A = j.at("kappa_A").get<double>();
  cfg.kappa_B = j.at("kappa_B").get<double>();
  cfg.kappa_w = j.at("kappa_w").get<double>();
  cfg.kappa = j.at("kappa").get<double>();
  cfg.gamma = j.at("gamma").get<double>();
  cfg.G = j.at("G").get<double>();
  cfg.beta = j.at("beta").get<double>();
  cfg.S = j.at("S").get<double>();
  cfg.d = j.at("d").get<double>();
  cfg.disturbance = j.at("disturbance").get<std::string>();
  cfg.B_rule = j.at("B_rule").get<std::string>();
  cfg.output_dir = j.at("output_dir").get<std::string>();
  return cfg;
}

Matrix draw_A(Rng& rng, int n) {
  Matrix W(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) W(r, c) = rng.uniform();
  }
  const double dn = static_cast<double>(n);
  return Matrix::Identity(n, n) / (2.0 * dn) + W / (5.0 * dn);
}

Matrix draw_B(Rng& rng, const ExperimentConfig& cfg) {
  Matrix B(cfg.n, cfg.m);
  if (cfg.B_rule == "uniform") {
    for (int r = 0; r < cfg.n; ++r) {
      for (int c = 0; c < cfg.m; ++c) B(r, c) = rng.uniform();
    }
  } else {
    B.setConstant(0.5);
  }
  const double nrm = operator_norm(B);
  if (nrm > cfg.kappa_B) B *= cfg.kappa_B / nrm;
  return B;
}

}  // namespace

GeneratedSuite generate_task_suite(const ExperimentConfig& cfg,
                                   std::uint64_t seed) {
  return generate_task_suite(cfg, seed, cfg.T);
}

GeneratedSuite generate_task_suite(const ExperimentConfig& cfg,
                                   std::uint64_t seed, long T) {
  cfg.validate();
  const SystemBounds bounds = cfg.bounds();
  Rng rng(mix_seed(seed, 0));
  GeneratedSuite out;

  json j;
  j["format"] = "metaoc-suite-v1";
  j["config"] = config_to_json(cfg);
  j["seed"] = seed;
  j["T"] = T;
  json jtasks = json::array();

  for (int i = 0; i < cfg.N; ++i) {
    const Matrix A = draw_A(rng, cfg.n);
    const Matrix B = draw_B(rng, cfg);
    const std::uint64_t dist_seed = rng.next_u64();

    json jt;
    jt["A"] = matrix_to_json(A);
    jt["B"] = matrix_to_json(B);
    jt["dist_seed"] = dist_seed;
    json jq = json::array();
    json jr = json::array();

    std::vector<CostFunction> costs;
    costs.reserve(static_cast<size_t>(T));
    for (long t = 0; t < T; ++t) {
      Vector qdiag(cfg.n), rdiag(cfg.m);
      for (int r = 0; r < cfg.n; ++r) qdiag(r) = rng.uniform(0.375, 0.625);
      for (int r = 0; r < cfg.m; ++r) rdiag(r) = rng.uniform(0.375, 0.625);
      costs.push_back(CostFunction::quadratic(qdiag.asDiagonal(),
                                              rdiag.asDiagonal()));
      json qrow = json::array(), rrow = json::array();
      for (int r = 0; r < cfg.n; ++r) qrow.push_back(qdiag(r));
      for (int r = 0; r < cfg.m; ++r) rrow.push_back(rdiag(r));
      jq.push_back(qrow);
      jr.push_back(rrow);
    }
    jt["Q_diag"] = jq;
    jt["R_diag"] = jr;
    jtasks.push_back(jt);

    DisturbanceSource src;
    src.kind = disturbance_kind_from_string(cfg.disturbance);
    src.kappa_w = cfg.kappa_w;
    src.seed = dist_seed;
    src.n = cfg.n;

    out.tasks.push_back(TaskSpec{SystemMatrices(A, B, bounds), T,
                                 std::move(costs), src, dist_seed});
  }
  j["tasks"] = jtasks;
  out.artifact.json_text = j.dump(1);
  out.artifact.hash = fnv1a_hex(out.artifact.json_text);
  return out;
}

std::vector<TaskSpec> tasks_from_artifact(const std::string& json_text,
                                          ExperimentConfig* cfg_out) {
  json j = json::parse(json_text);
  if (j.at("format").get<std::string>() != "metaoc-suite-v1") {
    throw ConfigError("suite artifact: unknown format");
  }
  const ExperimentConfig cfg = config_from_json(j.at("config"));
  if (cfg_out != nullptr) *cfg_out = cfg;
  const SystemBounds bounds = cfg.bounds();
  const long T = j.at("T").get<long>();

  std::vector<TaskSpec> tasks;
  for (const json& jt : j.at("tasks")) {
    const Matrix A = matrix_from_json(jt.at("A"));
    const Matrix B = matrix_from_json(jt.at("B"));
    const std::uint64_t dist_seed = jt.at("dist_seed").get<std::uint64_t>();
    std::vector<CostFunction> costs;
    const json& jq = jt.at("Q_diag");
    const json& jr = jt.at("R_diag");
    for (long t = 0; t < T; ++t) {
      Vector qdiag(cfg.n), rdiag(cfg.m);
      for (int r = 0; r < cfg.n; ++r) {
        qdiag(r) = jq.at(static_cast<size_t>(t)).at(static_cast<size_t>(r)).get<double>();
      }
      for (int r = 0; r < cfg.m; ++r) {
        rdiag(r) = jr.at(static_cast<size_t>(t)).at(static_cast<size_t>(r)).get<double>();
      }
      costs.push_back(CostFunction::quadratic(qdiag.asDiagonal(),
                                              rdiag.asDiagonal()));
    }
    DisturbanceSource src;
    src.kind = disturbance_kind_from_string(cfg.disturbance);
    src.kappa_w = cfg.kappa_w;
    src.seed = dist_seed;
    src.n = cfg.n;
    tasks.push_back(TaskSpec{SystemMatrices(A, B, bounds), T, std::move(costs),
                             src, dist_seed});
  }
  return tasks;
}

namespace {

MetaReport run_method(const std::string& method,
                      const std::vector<TaskSpec>& tasks,
                      const ConstantsBundle& consts,
                      const ExperimentConfig& cfg) {
  if (method == "non-adaptive") return run_non_adaptive_suite(tasks, consts);
  if (method == "independent-oc") return run_independent_oc(tasks, consts);
  if (method == "moc1") return run_moc1(tasks, cfg.D_star, consts);
  if (method == "moc2") return run_moc2(tasks, cfg.epsilon, cfg.zeta, consts);
  throw ConfigError("unknown method: " + method);
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

std::string suite_filename(long T, std::uint64_t seed) {
  return "suite_T" + std::to_string(T) + "_s" + std::to_string(seed) + ".json";
}

}  // namespace

std::vector<double> ExperimentReport::mean_meta_regret_curve(
    const std::string& method, long T) const {
  std::vector<double> acc;
  int count = 0;
  for (const ExperimentCell& cell : cells) {
    if (cell.method != method || cell.T != T || cell.failed) continue;
    const std::vector<double> curve = cell.report.cumulative_meta_regret();
    if (acc.empty()) acc.assign(curve.size(), 0.0);
    for (size_t i = 0; i < curve.size(); ++i) acc[i] += curve[i];
    ++count;
  }
  for (double& v : acc) v /= std::max(count, 1);
  return acc;
}

std::vector<double> ExperimentReport::per_seed_slopes(const std::string& method,
                                                      long T) const {
  std::vector<double> slopes;
  for (const ExperimentCell& cell : cells) {
    if (cell.method != method || cell.T != T || cell.failed) continue;
    const std::vector<double> curve = cell.report.cumulative_meta_regret();
    if (curve.size() < 2) continue;  // slope undefined for one task
    std::vector<double> xs(curve.size());
    for (size_t i = 0; i < curve.size(); ++i) xs[i] = static_cast<double>(i + 1);
    slopes.push_back(regression_slope(xs, curve));
  }
  return slopes;
}

double ExperimentReport::mean_final_meta_regret(const std::string& method,
                                                long T) const {
  double acc = 0.0;
  int count = 0;
  for (const ExperimentCell& cell : cells) {
    if (cell.method != method || cell.T != T || cell.failed) continue;
    acc += cell.report.meta_regret;
    ++count;
  }
  return count > 0 ? acc / count : 0.0;
}

double regression_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("regression_slope: need >= 2 points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("regression_slope: degenerate x");
  return (n * sxy - sx * sy) / denom;
}

void write_results_csv(const std::string& path,
                       const std::vector<ExperimentCell>& cells) {
  std::ofstream out(path, std::ios::binary);
  out << "method,seed,task_index,T,task_regret,cum_meta_regret,D_i,"
         "dist_Mstar_to_meta,suite_hash\n";
  for (const ExperimentCell& cell : cells) {
    if (cell.failed) continue;
    const std::vector<double> cum = cell.report.cumulative_meta_regret();
    for (size_t i = 0; i < cell.report.task_regrets.size(); ++i) {
      out << cell.method << ',' << cell.seed << ',' << (i + 1) << ',' << cell.T
          << ',' << format_g17(cell.report.task_regrets[i]) << ','
          << format_g17(cum[i]) << ',' << format_g17(cell.report.D_trace[i])
          << ',' << format_g17(cell.report.dist_to_meta[i]) << ','
          << cell.suite_hash << '\n';
    }
  }
}

void write_summary_json(const std::string& path, const ExperimentReport& report) {
  json j;
  j["config"] = config_to_json(report.cfg);
  j["partial"] = report.partial;

  json failures = json::array();
  json suites = json::array();
  std::vector<std::pair<long, std::uint64_t>> seen;
  for (const ExperimentCell& cell : report.cells) {
    if (cell.failed) {
      failures.push_back({{"method", cell.method},
                          {"seed", cell.seed},
                          {"T", cell.T},
                          {"error", cell.error}});
    }
    const auto key = std::make_pair(cell.T, cell.seed);
    if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
      seen.push_back(key);
      suites.push_back(
          {{"T", cell.T}, {"seed", cell.seed}, {"hash", cell.suite_hash}});
    }
  }
  j["failures"] = failures;
  j["suites"] = suites;

  std::vector<long> Ts = report.cfg.T_sweep;
  if (Ts.empty()) Ts.push_back(report.cfg.T);

  json methods;
  for (const std::string& method : report.cfg.methods) {
    json per_T;
    for (long T : Ts) {
      json stats;
      stats["mean_final_meta_regret"] = report.mean_final_meta_regret(method, T);
      stats["mean_curve"] = report.mean_meta_regret_curve(method, T);
      const std::vector<double> slopes = report.per_seed_slopes(method, T);
      stats["per_seed_slopes"] = slopes;
      if (!slopes.empty()) {
        double mean = 0;
        for (double s : slopes) mean += s;
        mean /= static_cast<double>(slopes.size());
        double var = 0;
        for (double s : slopes) var += (s - mean) * (s - mean);
        var = slopes.size() > 1 ? var / static_cast<double>(slopes.size() - 1) : 0.0;
        stats["mean_slope"] = mean;
        stats["se_slope"] = std::sqrt(var / static_cast<double>(slopes.size()));
      }
      per_T[std::to_string(T)] = stats;
    }
    methods[method] = per_T;
  }
  j["methods"] = methods;

  std::ofstream out(path, std::ios::binary);
  out << j.dump(1) << "\n";
}

void write_charts(const std::string& dir, const ExperimentReport& report) {
  std::vector<long> Ts = report.cfg.T_sweep;
  const bool sweep = !Ts.empty();
  if (Ts.empty()) Ts.push_back(report.cfg.T);

  if (!sweep) {
    std::vector<ChartSeries> series;
    for (const std::string& method : report.cfg.methods) {
      ChartSeries s;
      s.name = method;
      s.ys = report.mean_meta_regret_curve(method, Ts[0]);
      for (size_t i = 0; i < s.ys.size(); ++i) {
        s.xs.push_back(static_cast<double>(i + 1));
      }
      series.push_back(std::move(s));
    }
    write_line_chart(dir + "/fig_meta_regret_vs_N.svg",
                     "Meta-regret vs number of tasks", "N (tasks)",
                     "mean meta-regret", series);
  } else {
    std::vector<ChartSeries> series;
    for (const std::string& method : report.cfg.methods) {
      ChartSeries s;
      s.name = method;
      for (long T : Ts) {
        const double v = report.mean_final_meta_regret(method, T);
        if (v > 0.0) {
          s.xs.push_back(std::log(static_cast<double>(T)));
          s.ys.push_back(std::log(v));
        }
      }
      series.push_back(std::move(s));
    }
    write_line_chart(dir + "/fig_meta_regret_vs_T.svg",
                     "Meta-regret vs task duration (log-log)", "log T",
                     "log mean meta-regret", series);
  }
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  fs::create_directories(cfg.output_dir);

  ExperimentReport report;
  report.cfg = cfg;

  std::vector<long> Ts = cfg.T_sweep;
  if (Ts.empty()) Ts.push_back(cfg.T);

  for (long T : Ts) {
    const int H = horizon(T, cfg.gamma);
    const ConstantsBundle consts =
        compute_constants(cfg.bounds(), H, cfg.effective_d());
    for (std::uint64_t seed : cfg.seeds) {
      const GeneratedSuite suite = generate_task_suite(cfg, seed, T);
      {
        std::ofstream out(fs::path(cfg.output_dir) / suite_filename(T, seed),
                          std::ios::binary);
        out << suite.artifact.json_text;
      }
      for (const std::string& method : cfg.methods) {
        ExperimentCell cell;
        cell.method = method;
        cell.seed = seed;
        cell.T = T;
        cell.suite_hash = suite.artifact.hash;
        try {
          cell.report = run_method(method, suite.tasks, consts, cfg);
        } catch (const std::exception& e) {
          cell.failed = true;
          cell.error = e.what();
          report.partial = true;
        }
        report.cells.push_back(std::move(cell));
      }
    }
  }

  write_results_csv((fs::path(cfg.output_dir) / "results.csv").string(),
                    report.cells);
  write_summary_json((fs::path(cfg.output_dir) / "summary.json").string(),
                     report);
  write_charts(cfg.output_dir, report);
  return report;
}

ExperimentReport replay_experiment(const std::string& input_dir,
                                   const std::string& output_dir) {
  const fs::path summary_path = fs::path(input_dir) / "summary.json";
  std::ifstream in(summary_path);
  if (!in) throw ConfigError("replay: cannot open " + summary_path.string());
  json summary = json::parse(in);
  ExperimentConfig cfg = config_from_json(summary.at("config"));
  cfg.output_dir = output_dir;
  fs::create_directories(output_dir);

  ExperimentReport report;
  report.cfg = cfg;

  for (const json& js : summary.at("suites")) {
    const long T = js.at("T").get<long>();
    const std::uint64_t seed = js.at("seed").get<std::uint64_t>();
    const fs::path suite_path = fs::path(input_dir) / suite_filename(T, seed);
    std::ifstream suite_in(suite_path, std::ios::binary);
    if (!suite_in) throw ConfigError("replay: missing " + suite_path.string());
    std::ostringstream buf;
    buf << suite_in.rdbuf();
    const std::string text = buf.str();

    const std::vector<TaskSpec> tasks = tasks_from_artifact(text);
    const int H = horizon(T, cfg.gamma);
    const ConstantsBundle consts =
        compute_constants(cfg.bounds(), H, cfg.effective_d());
    {
      std::ofstream out(fs::path(output_dir) / suite_filename(T, seed),
                        std::ios::binary);
      out << text;
    }
    for (const std::string& method : cfg.methods) {
      ExperimentCell cell;
      cell.method = method;
      cell.seed = seed;
      cell.T = T;
      cell.suite_hash = fnv1a_hex(text);
      try {
        cell.report = run_method(method, tasks, consts, cfg);
      } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
        report.partial = true;
      }
      report.cells.push_back(std::move(cell));
    }
  }

  write_results_csv((fs::path(output_dir) / "results.csv").string(),
                    report.cells);
  write_summary_json((fs::path(output_dir) / "summary.json").string(), report);
  write_charts(output_dir, report);
  return report;
}

}  // namespace metaoc
