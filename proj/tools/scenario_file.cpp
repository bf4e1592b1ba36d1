#include "scenario_file.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "brisk/errors.hpp"

namespace brisk::cli {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::vector<std::string>& keys) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ParseError(where + ": unknown field \"" + key + "\"");
    }
  }
  for (const auto& key : keys) {
    if (!obj.contains(key)) throw ParseError(where + ": missing field \"" + key + "\"");
  }
}

double finite_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError(where + ": number must be finite");
  return x;
}

std::int64_t integer_number(const json& v, const std::string& where) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ParseError(where + ": expected an integer");
  }
  return v.get<std::int64_t>();
}

Eigen::VectorXd vector_field(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ParseError(where + ": expected a non-empty array");
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = finite_number(v[i], where + "[" + std::to_string(i) + "]");
  }
  return out;
}

Eigen::MatrixXd matrix_field(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ParseError(where + ": expected an array of rows");
  const std::size_t rows = v.size();
  std::size_t cols = 0;
  Eigen::MatrixXd out;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = v[r];
    if (!row.is_array() || row.empty()) throw ParseError(where + ": rows must be arrays");
    if (r == 0) {
      cols = row.size();
      out.resize(rows, cols);
    } else if (row.size() != cols) {
      throw ParseError(where + ": ragged matrix rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      out(r, c) = finite_number(row[c], where + " entry");
    }
  }
  return out;
}

TrendDistribution parse_trend(const json& t) {
  if (!t.is_object() || !t.contains("kind") || !t["kind"].is_string()) {
    throw ParseError("trend: expected an object with a \"kind\" string");
  }
  const std::string kind = t["kind"].get<std::string>();
  if (kind == "point_mass") {
    require_keys(t, "trend", {"kind", "c"});
    return TrendDistribution::point_mass(vector_field(t["c"], "trend.c"));
  }
  if (kind == "bernoulli") {
    require_keys(t, "trend", {"kind", "p"});
    return TrendDistribution::bernoulli(vector_field(t["p"], "trend.p"));
  }
  if (kind == "uniform_box") {
    require_keys(t, "trend", {"kind", "lo", "hi"});
    return TrendDistribution::uniform_box(vector_field(t["lo"], "trend.lo"),
                                          vector_field(t["hi"], "trend.hi"));
  }
  if (kind == "discrete") {
    require_keys(t, "trend", {"kind", "atoms"});
    const json& atoms = t["atoms"];
    if (!atoms.is_array() || atoms.empty()) throw ParseError("trend.atoms: expected an array");
    std::vector<std::pair<Eigen::VectorXd, double>> parsed;
    for (const json& atom : atoms) {
      require_keys(atom, "trend.atoms[]", {"value", "prob"});
      parsed.emplace_back(vector_field(atom["value"], "trend.atoms[].value"),
                          finite_number(atom["prob"], "trend.atoms[].prob"));
    }
    return TrendDistribution::discrete(std::move(parsed));
  }
  throw ParseError("trend.kind: unknown kind \"" + kind + "\"");
}

}  // namespace

RuinScenario ScenarioFile::scenario_for_level(double u) const {
  RuinScenario s{model, barrier, trend, horizon, u, n_steps, n_paths, master_seed};
  return s;
}

AsymptoticBudgets ScenarioFile::budgets() const {
  AsymptoticBudgets b;
  b.ia_paths = ia_paths;
  b.tail_budget = tail_budget;
  return b;
}

ScenarioFile load_scenario(const std::string& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("scenario JSON: " + std::string(e.what()));
  }

  require_keys(doc, "scenario",
               {"schema_version", "model", "barrier", "trend", "horizon", "levels", "budgets",
                "master_seed"});
  if (integer_number(doc["schema_version"], "schema_version") != 1) {
    throw ParseError("schema_version: expected 1");
  }

  if (overrides.levels) {
    json levels = json::array();
    for (double u : *overrides.levels) levels.push_back(u);
    doc["levels"] = levels;
  }
  if (overrides.seed) doc["master_seed"] = *overrides.seed;

  ScenarioFile out;

  const json& model = doc["model"];
  if (!model.is_object() || model.size() != 1) {
    throw ParseError("model: expected exactly one of \"mixing\" or \"equicorr\"");
  }
  if (model.contains("mixing")) {
    out.model = CovarianceModel::from_mixing(matrix_field(model["mixing"], "model.mixing"));
  } else if (model.contains("equicorr")) {
    const json& eq = model["equicorr"];
    require_keys(eq, "model.equicorr", {"dim", "rho"});
    const int dim = static_cast<int>(integer_number(eq["dim"], "model.equicorr.dim"));
    const double rho = finite_number(eq["rho"], "model.equicorr.rho");
    out.model = CovarianceModel::equicorrelated(dim, rho);
  } else {
    throw ParseError("model: expected \"mixing\" or \"equicorr\"");
  }

  out.barrier = vector_field(doc["barrier"], "barrier");
  if (out.barrier.size() != out.model.dim()) {
    throw ParseError("barrier: dimension does not match the model");
  }
  if (model.contains("equicorr")) {
    out.equicorr.emplace(out.model.dim(), finite_number(model["equicorr"]["rho"], "rho"),
                         out.barrier);
  }

  out.trend = parse_trend(doc["trend"]);
  if (out.trend.dim() != out.model.dim()) {
    throw ParseError("trend: dimension does not match the model");
  }

  out.horizon = finite_number(doc["horizon"], "horizon");
  if (!(out.horizon > 0.0)) throw ParseError("horizon: must be positive");

  const json& levels = doc["levels"];
  if (!levels.is_array() || levels.empty()) throw ParseError("levels: expected a non-empty array");
  double prev = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double u = finite_number(levels[i], "levels[" + std::to_string(i) + "]");
    if (!(u > 0.0)) throw ParseError("levels: must be strictly positive");
    if (i > 0 && !(u > prev)) throw ParseError("levels: must be strictly increasing");
    out.levels.push_back(u);
    prev = u;
  }

  const json& budgets = doc["budgets"];
  require_keys(budgets, "budgets", {"n_steps", "n_paths", "tail_budget", "ia_paths", "ia_lambda"});
  out.n_steps = static_cast<int>(integer_number(budgets["n_steps"], "budgets.n_steps"));
  out.n_paths = integer_number(budgets["n_paths"], "budgets.n_paths");
  out.tail_budget = integer_number(budgets["tail_budget"], "budgets.tail_budget");
  out.ia_paths = integer_number(budgets["ia_paths"], "budgets.ia_paths");
  out.ia_lambda = finite_number(budgets["ia_lambda"], "budgets.ia_lambda");
  if (!(out.ia_lambda > 0.0)) throw ParseError("budgets.ia_lambda: must be positive");

  const json& seed = doc["master_seed"];
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
    throw ParseError("master_seed: expected an unsigned integer");
  }
  if (seed.is_number_integer() && seed.get<std::int64_t>() < 0) {
    throw ParseError("master_seed: must be nonnegative");
  }
  out.master_seed = seed.get<std::uint64_t>();

  out.canonical = doc;
  return out;
}

std::string scenario_hash(const nlohmann::json& canonical) {
  const std::string bytes = canonical.dump();
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string ia_cache_key(const ScenarioFile& sc, int ia_steps) {
  json key;
  json sigma = json::array();
  for (int r = 0; r < sc.model.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < sc.model.dim(); ++c) row.push_back(sc.model.sigma()(r, c));
    sigma.push_back(row);
  }
  json barrier = json::array();
  const double scale = std::sqrt(sc.horizon);
  for (int i = 0; i < sc.barrier.size(); ++i) barrier.push_back(sc.barrier[i] / scale);
  key["sigma"] = sigma;
  key["barrier"] = barrier;  // rescaled to T=1, which is what I_a sees
  key["ia_lambda"] = sc.ia_lambda;
  key["ia_paths"] = sc.ia_paths;
  key["ia_steps"] = ia_steps;
  return scenario_hash(key);
}

}  // namespace brisk::cli
