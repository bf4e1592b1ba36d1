#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "brisk/asymptotics.hpp"
#include "brisk/simulator.hpp"
#include "brisk/version.hpp"
#include "csv_out.hpp"
#include "result_cache.hpp"

namespace brisk::cli {

namespace {

using nlohmann::json;

constexpr int kIaStepsPerUnit = 4096;
constexpr int kEtaDraws = 256;

class WallClock {
 public:
  explicit WallClock(std::string label) : label_(std::move(label)), start_(clock::now()) {}
  ~WallClock() {
    const double ms =
        std::chrono::duration<double, std::milli>(clock::now() - start_).count();
    std::cerr << "brisk: " << label_ << " completed in " << static_cast<long>(ms) << " ms\n";
  }

 private:
  using clock = std::chrono::steady_clock;
  std::string label_;
  clock::time_point start_;
};

void emit(const CommandOptions& options, const std::string& csv, const json& doc) {
  if (options.json_output) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << csv;
  }
  if (options.csv_path) write_file_atomic(*options.csv_path, csv);
}

json index_list(const std::vector<int>& idx) {
  json out = json::array();
  for (int i : idx) out.push_back(i + 1);  // 1-based in external output
  return out;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

std::string bracketed(const Eigen::VectorXd& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out + "]";
}

std::string bracketed_indices(const std::vector<int>& idx) {
  std::string out = "[";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(idx[i] + 1);
  }
  return out + "]";
}

std::string method_word(const std::string& meta) {
  const auto pos = meta.find(' ');
  return pos == std::string::npos ? meta : meta.substr(0, pos);
}

struct AsymContext {
  QpSolution qp;
  EstimateWithCI ia;
  Eigen::VectorXd barrier_rescaled;
  TrendDistribution trend_rescaled;
  bool cache_hit = false;
};

AsymContext prepare_asym(const ScenarioFile& sc) {
  AsymContext ctx{.qp = {}, .ia = {}, .barrier_rescaled = sc.barrier,
                  .trend_rescaled = sc.trend, .cache_hit = false};
  const double scale = std::sqrt(sc.horizon);
  if (sc.horizon != 1.0) {
    ctx.barrier_rescaled /= scale;
    ctx.trend_rescaled = sc.trend.scaled(scale);
  }
  if (sc.equicorr) {
    ctx.qp = solve_equicorrelated(EquicorrSpec(sc.model.dim(), sc.equicorr->rho,
                                               ctx.barrier_rescaled));
  } else {
    ctx.qp = solve_qp(sc.model, ctx.barrier_rescaled);
  }

  const std::string key = ia_cache_key(sc, kIaStepsPerUnit);
  ResultCache cache;
  if (auto hit = cache.read_ia(key, sc.ia_paths, kIaStepsPerUnit, sc.ia_lambda)) {
    std::cerr << "brisk: cache hit " << key << "\n";
    ctx.cache_hit = true;
    ctx.ia.point = hit->estimate;
    ctx.ia.std_error = hit->std_error;
    ctx.ia.n = hit->ia_paths;
    ctx.ia.seed = sc.master_seed;
    ctx.ia.meta = "ia-cache " + key;
    return ctx;
  }

  if (ctx.qp.active_set.size() <= 3) {
    ctx.ia = estimate_ia(ctx.qp, sc.model, sc.ia_lambda, kIaStepsPerUnit, sc.ia_paths,
                         sc.master_seed);
  } else {
    QuadratureOptions q;
    q.inner_paths = std::min<std::int64_t>(sc.ia_paths, 4000);
    const int m = static_cast<int>(ctx.qp.active_set.size());
    q.grid = std::max(6, static_cast<int>(std::floor(
                             std::pow(2e7 / static_cast<double>(q.inner_paths), 1.0 / m))));
    ctx.ia = estimate_ia_quadrature(ctx.qp, sc.model, sc.ia_lambda, q, sc.master_seed);
  }
  ResultCache::IaEntry entry;
  entry.estimate = ctx.ia.point;
  entry.std_error = ctx.ia.std_error;
  entry.ia_paths = sc.ia_paths;
  entry.ia_steps = kIaStepsPerUnit;
  entry.ia_lambda = sc.ia_lambda;
  cache.write_ia(key, entry);
  return ctx;
}

struct AsymRow {
  double u;
  double lambda_product;
  EstimateWithCI ia, tail, psi;
};

AsymRow asym_row(const ScenarioFile& sc, const AsymContext& ctx, double u) {
  AsymRow row;
  row.u = u;
  row.lambda_product = ctx.qp.lambda_product();
  row.ia = ctx.ia;
  row.tail = tail_term(sc.model, ctx.barrier_rescaled * u, ctx.trend_rescaled, sc.tail_budget,
                       kEtaDraws, sc.master_seed);
  row.psi.point = row.lambda_product * row.ia.point * row.tail.point;
  double rel_sq = 0.0;
  if (row.ia.point > 0.0) rel_sq += std::pow(row.ia.std_error / row.ia.point, 2);
  if (row.tail.point > 0.0) rel_sq += std::pow(row.tail.std_error / row.tail.point, 2);
  row.psi.std_error = row.psi.point * std::sqrt(rel_sq);
  return row;
}

}  // namespace

int cmd_qp(const CommandOptions& options) {
  WallClock clock("qp");
  const ScenarioFile sc = load_scenario(options.scenario_path, options.overrides);
  QpSolution qp;
  if (sc.equicorr) {
    qp = solve_equicorrelated(*sc.equicorr);
  } else {
    qp = solve_qp(sc.model, sc.barrier);
  }

  std::ostringstream text;
  text << "a_tilde = " << bracketed(qp.a_tilde) << "\n"
       << "I = " << bracketed_indices(qp.active_set) << "\n"
       << "J = " << bracketed_indices(qp.complement) << "\n"
       << "U = " << bracketed_indices(qp.weak_set) << "\n"
       << "lambda = " << bracketed(qp.lambda) << "\n"
       << "objective = " << fmt(qp.objective) << "\n";

  json doc;
  doc["command"] = "qp";
  doc["tool_version"] = kToolVersion;
  doc["scenario_hash"] = scenario_hash(sc.canonical);
  doc["a_tilde"] = vector_json(qp.a_tilde);
  doc["active_set"] = index_list(qp.active_set);
  doc["complement"] = index_list(qp.complement);
  doc["weak_set"] = index_list(qp.weak_set);
  doc["lambda"] = vector_json(qp.lambda);
  doc["objective"] = qp.objective;

  emit(options, text.str(), doc);
  return 0;
}

int cmd_simulate(const CommandOptions& options) {
  WallClock clock("simulate");
  const ScenarioFile sc = load_scenario(options.scenario_path, options.overrides);
  std::ostringstream csv;
  csv << "u,psi_hat,stderr,n_paths,n_steps,seed\n";
  json rows = json::array();
  for (double u : sc.levels) {
    const EstimateWithCI est = simulate_ruin(sc.scenario_for_level(u));
    csv << fmt(u) << ',' << fmt(est.point) << ',' << fmt(est.std_error) << ','
        << fmt(sc.n_paths) << ',' << fmt(sc.n_steps) << ',' << fmt(sc.master_seed) << "\n";
    rows.push_back({{"u", u},
                    {"psi_hat", est.point},
                    {"stderr", est.std_error},
                    {"n_paths", sc.n_paths},
                    {"n_steps", sc.n_steps},
                    {"seed", sc.master_seed}});
  }
  json doc{{"command", "simulate"},
           {"tool_version", kToolVersion},
           {"scenario_hash", scenario_hash(sc.canonical)},
           {"rows", rows}};
  emit(options, csv.str(), doc);
  return 0;
}

int cmd_tail(const CommandOptions& options) {
  WallClock clock("tail");
  const ScenarioFile sc = load_scenario(options.scenario_path, options.overrides);
  Eigen::VectorXd barrier = sc.barrier;
  TrendDistribution trend = sc.trend;
  if (sc.horizon != 1.0) {
    const double scale = std::sqrt(sc.horizon);
    barrier /= scale;
    trend = trend.scaled(scale);
  }
  std::ostringstream csv;
  csv << "u,tail,stderr,method,seed\n";
  json rows = json::array();
  for (double u : sc.levels) {
    const EstimateWithCI est =
        tail_term(sc.model, barrier * u, trend, sc.tail_budget, kEtaDraws, sc.master_seed);
    const std::string method = method_word(est.meta);
    csv << fmt(u) << ',' << fmt(est.point) << ',' << fmt(est.std_error) << ',' << method << ','
        << fmt(sc.master_seed) << "\n";
    rows.push_back({{"u", u},
                    {"tail", est.point},
                    {"stderr", est.std_error},
                    {"method", method},
                    {"seed", sc.master_seed}});
  }
  json doc{{"command", "tail"},
           {"tool_version", kToolVersion},
           {"scenario_hash", scenario_hash(sc.canonical)},
           {"rows", rows}};
  emit(options, csv.str(), doc);
  return 0;
}

int cmd_asym(const CommandOptions& options) {
  WallClock clock("asym");
  const ScenarioFile sc = load_scenario(options.scenario_path, options.overrides);
  const AsymContext ctx = prepare_asym(sc);
  std::ostringstream csv;
  csv << "u,lambda_product,ia,ia_stderr,tail,tail_stderr,psi_asym\n";
  json rows = json::array();
  for (double u : sc.levels) {
    const AsymRow row = asym_row(sc, ctx, u);
    csv << fmt(u) << ',' << fmt(row.lambda_product) << ',' << fmt(row.ia.point) << ','
        << fmt(row.ia.std_error) << ',' << fmt(row.tail.point) << ',' << fmt(row.tail.std_error)
        << ',' << fmt(row.psi.point) << "\n";
    rows.push_back({{"u", u},
                    {"lambda_product", row.lambda_product},
                    {"ia", row.ia.point},
                    {"ia_stderr", row.ia.std_error},
                    {"tail", row.tail.point},
                    {"tail_stderr", row.tail.std_error},
                    {"psi_asym", row.psi.point}});
  }
  json doc{{"command", "asym"},
           {"tool_version", kToolVersion},
           {"scenario_hash", scenario_hash(sc.canonical)},
           {"rows", rows}};
  emit(options, csv.str(), doc);
  return 0;
}

int cmd_validate(const CommandOptions& options) {
  WallClock clock("validate");
  const ScenarioFile sc = load_scenario(options.scenario_path, options.overrides);
  if (sc.levels.size() < 2 || sc.levels.back() < 2.0 * sc.levels.front()) {
    throw SpanTooNarrow("validate needs levels spanning at least a factor 2");
  }
  const AsymContext ctx = prepare_asym(sc);

  std::ostringstream csv;
  csv << "u,psi_hat,psi_stderr,psi_asym,asym_stderr,ratio,ratio_stderr\n";
  json rows = json::array();
  double first_ratio = 0.0, last_ratio = 0.0;
  for (std::size_t i = 0; i < sc.levels.size(); ++i) {
    const double u = sc.levels[i];
    const EstimateWithCI sim = simulate_ruin(sc.scenario_for_level(u));
    const AsymRow asym = asym_row(sc, ctx, u);
    const double ratio = asym.psi.point > 0.0 ? sim.point / asym.psi.point : 0.0;
    double ratio_se = 0.0;
    if (sim.point > 0.0 && asym.psi.point > 0.0) {
      ratio_se = ratio * std::sqrt(std::pow(sim.std_error / sim.point, 2) +
                                   std::pow(asym.psi.std_error / asym.psi.point, 2));
    }
    if (i == 0) first_ratio = ratio;
    if (i == sc.levels.size() - 1) last_ratio = ratio;
    csv << fmt(u) << ',' << fmt(sim.point) << ',' << fmt(sim.std_error) << ','
        << fmt(asym.psi.point) << ',' << fmt(asym.psi.std_error) << ',' << fmt(ratio) << ','
        << fmt(ratio_se) << "\n";
    rows.push_back({{"u", u},
                    {"psi_hat", sim.point},
                    {"psi_stderr", sim.std_error},
                    {"psi_asym", asym.psi.point},
                    {"asym_stderr", asym.psi.std_error},
                    {"ratio", ratio},
                    {"ratio_stderr", ratio_se}});
  }

  // A finite budget can only certify the trend, never refute the
  // asymptotics, so the negative verdict is INCONCLUSIVE.
  const bool trend_ok = std::abs(last_ratio - 1.0) < std::abs(first_ratio - 1.0);
  const bool band_ok = last_ratio >= options.band_lo && last_ratio <= options.band_hi;
  const std::string verdict = trend_ok && band_ok ? "PASS" : "INCONCLUSIVE";

  json doc{{"command", "validate"},
           {"tool_version", kToolVersion},
           {"scenario_hash", scenario_hash(sc.canonical)},
           {"rows", rows},
           {"verdict", verdict}};
  if (options.json_output) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << csv.str();
    std::cout << "VERDICT: " << verdict << "\n";
  }
  if (options.csv_path) write_file_atomic(*options.csv_path, csv.str());
  return 0;
}

int cmd_cache(const std::string& action) {
  ResultCache cache;
  if (action == "path") {
    std::cout << cache.dir().string() << "\n";
    return 0;
  }
  if (action == "clear") {
    const std::size_t removed = cache.clear();
    std::cout << "removed " << removed << " entries\n";
    return 0;
  }
  if (action == "list") {
    for (const auto& [key, entry] : cache.list()) {
      std::cout << key << " ia=" << fmt(entry.estimate) << " stderr=" << fmt(entry.std_error)
                << " ia_paths=" << entry.ia_paths << " ia_steps=" << entry.ia_steps
                << " ia_lambda=" << fmt(entry.ia_lambda) << " tool_version="
                << entry.tool_version << "\n";
    }
    return 0;
  }
  throw ParseError("cache action must be one of list, clear, path");
}

}  // namespace brisk::cli
