#include "result_cache.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "brisk/errors.hpp"
#include "brisk/version.hpp"

namespace brisk::cli {

namespace {
using nlohmann::json;
namespace fs = std::filesystem;
}  // namespace

ResultCache::ResultCache() {
  if (const char* env = std::getenv("BRISK_CACHE_DIR")) {
    dir_ = env;
  } else if (const char* xdg = std::getenv("XDG_CACHE_HOME")) {
    dir_ = fs::path(xdg) / "brisk";
  } else if (const char* home = std::getenv("HOME")) {
    dir_ = fs::path(home) / ".cache" / "brisk";
  } else {
    dir_ = fs::temp_directory_path() / "brisk-cache";
  }
}

std::optional<ResultCache::IaEntry> ResultCache::read_ia(const std::string& key,
                                                         std::int64_t ia_paths, int ia_steps,
                                                         double ia_lambda) const {
  const fs::path file = dir_ / (key + "-ia.json");
  std::error_code ec;
  if (!fs::exists(file, ec)) return std::nullopt;
  std::ifstream in(file);
  if (!in) return std::nullopt;
  try {
    const json doc = json::parse(in);
    IaEntry entry;
    entry.estimate = doc.at("estimate").get<double>();
    entry.std_error = doc.at("stderr").get<double>();
    entry.ia_paths = doc.at("ia_paths").get<std::int64_t>();
    entry.ia_steps = doc.at("ia_steps").get<int>();
    entry.ia_lambda = doc.at("ia_lambda").get<double>();
    entry.tool_version = doc.at("tool_version").get<std::string>();
    if (entry.tool_version != kToolVersion || entry.ia_paths != ia_paths ||
        entry.ia_steps != ia_steps || entry.ia_lambda != ia_lambda) {
      return std::nullopt;  // stale
    }
    return entry;
  } catch (const json::exception& e) {
    std::cerr << "warning: ignoring corrupted cache entry " << file.string() << ": " << e.what()
              << "\n";
    return std::nullopt;
  }
}

void ResultCache::write_ia(const std::string& key, const IaEntry& entry) const {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create cache directory " + dir_.string() + ": " + ec.message());
  json doc;
  doc["estimate"] = entry.estimate;
  doc["stderr"] = entry.std_error;
  doc["ia_paths"] = entry.ia_paths;
  doc["ia_steps"] = entry.ia_steps;
  doc["ia_lambda"] = entry.ia_lambda;
  doc["tool_version"] = kToolVersion;

  const fs::path file = dir_ / (key + "-ia.json");
  const fs::path tmp = dir_ / (key + "-ia.json.tmp");
  {
    std::ofstream out(tmp);
    if (!out) throw IoError("cannot write cache file " + tmp.string());
    out << doc.dump(2) << "\n";
  }
  fs::rename(tmp, file, ec);
  if (ec) throw IoError("cannot finalize cache file " + file.string() + ": " + ec.message());
}

std::vector<std::pair<std::string, ResultCache::IaEntry>> ResultCache::list() const {
  std::vector<std::pair<std::string, IaEntry>> out;
  std::error_code ec;
  if (!fs::exists(dir_, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir_, ec)) {
    const std::string name = entry.path().filename().string();
    const std::string suffix = "-ia.json";
    if (name.size() <= suffix.size() || name.substr(name.size() - suffix.size()) != suffix) {
      continue;
    }
    const std::string key = name.substr(0, name.size() - suffix.size());
    std::ifstream in(entry.path());
    if (!in) continue;
    try {
      const json doc = json::parse(in);
      IaEntry e;
      e.estimate = doc.at("estimate").get<double>();
      e.std_error = doc.at("stderr").get<double>();
      e.ia_paths = doc.at("ia_paths").get<std::int64_t>();
      e.ia_steps = doc.at("ia_steps").get<int>();
      e.ia_lambda = doc.at("ia_lambda").get<double>();
      e.tool_version = doc.at("tool_version").get<std::string>();
      out.emplace_back(key, e);
    } catch (const json::exception&) {
      std::cerr << "warning: unreadable cache entry " << entry.path().string() << "\n";
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::size_t ResultCache::clear() const {
  std::error_code ec;
  if (!fs::exists(dir_, ec)) return 0;
  std::size_t removed = 0;
  for (const auto& entry : fs::directory_iterator(dir_, ec)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 8 && name.substr(name.size() - 8) == "-ia.json") {
      std::error_code rm;
      if (fs::remove(entry.path(), rm)) ++removed;
      if (rm) throw IoError("cannot remove " + entry.path().string() + ": " + rm.message());
    }
  }
  return removed;
}

}  // namespace brisk::cli
