#pragma once

#include <optional>
#include <string>

#include "scenario_file.hpp"

namespace brisk::cli {

struct CommandOptions {
  std::string scenario_path;
  std::optional<std::string> csv_path;
  bool json_output = false;
  Overrides overrides;
  double band_lo = 0.75;
  double band_hi = 1.25;
};

int cmd_qp(const CommandOptions& options);
int cmd_simulate(const CommandOptions& options);
int cmd_tail(const CommandOptions& options);
int cmd_asym(const CommandOptions& options);
int cmd_validate(const CommandOptions& options);
int cmd_cache(const std::string& action);

}  // namespace brisk::cli
