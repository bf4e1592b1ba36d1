#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "brisk/estimate.hpp"

namespace brisk::cli {

// Content-addressed store for I_a estimates under BRISK_CACHE_DIR
// (default: $XDG_CACHE_HOME/brisk or ~/.cache/brisk). Entries are JSON
// files named <key>-ia.json; stale entries (different tool version or
// budgets) are ignored on read, corrupted ones are skipped with a warning.
class ResultCache {
 public:
  ResultCache();  // resolves the directory from the environment

  const std::filesystem::path& dir() const { return dir_; }

  struct IaEntry {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t ia_paths = 0;
    int ia_steps = 0;
    double ia_lambda = 0.0;
    std::string tool_version;
  };

  std::optional<IaEntry> read_ia(const std::string& key, std::int64_t ia_paths, int ia_steps,
                                 double ia_lambda) const;
  void write_ia(const std::string& key, const IaEntry& entry) const;

  std::vector<std::pair<std::string, IaEntry>> list() const;
  std::size_t clear() const;

 private:
  std::filesystem::path dir_;
};

}  // namespace brisk::cli
