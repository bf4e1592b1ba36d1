#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "brisk/errors.hpp"
#include "brisk/version.hpp"
#include "commands.hpp"

namespace {

int exit_code(brisk::ErrorCategory cat) {
  switch (cat) {
    case brisk::ErrorCategory::parse:
      return 2;
    case brisk::ErrorCategory::domain:
      return 3;
    case brisk::ErrorCategory::config:
      return 4;
    case brisk::ErrorCategory::io:
      return 5;
  }
  return 1;
}

std::vector<double> parse_levels(const std::string& arg) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= arg.size()) {
    const std::size_t comma = arg.find(',', pos);
    const std::string item = arg.substr(pos, comma == std::string::npos ? std::string::npos
                                                                        : comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw brisk::ParseError("--levels: cannot parse \"" + item + "\"");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw brisk::ParseError("--levels: empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simultaneous ruin probabilities for multivariate Brownian risk models"};
  app.set_version_flag("--version", brisk::kToolVersion);
  app.require_subcommand(1);

  brisk::cli::CommandOptions options;
  std::string levels_arg, band_arg, cache_action = "list";

  auto add_common = [&](CLI::App* cmd, bool needs_scenario = true) {
    if (needs_scenario) {
      cmd->add_option("scenario", options.scenario_path, "Scenario JSON file")->required();
    }
    cmd->add_option("--csv", options.csv_path, "Write CSV rows to this path (atomic)");
    cmd->add_flag("--json", options.json_output, "Machine-readable JSON on stdout");
    cmd->add_option("--levels", levels_arg, "Override levels, comma separated");
    cmd->add_option("--seed", options.overrides.seed, "Override master seed");
  };

  CLI::App* qp = app.add_subcommand("qp", "Solve the quadratic program for the barrier");
  add_common(qp);
  CLI::App* simulate = app.add_subcommand("simulate", "Direct Monte Carlo ruin estimates");
  add_common(simulate);
  CLI::App* asym = app.add_subcommand("asym", "Asymptotic approximation per level");
  add_common(asym);
  CLI::App* validate = app.add_subcommand("validate", "Simulation vs asymptotics ratio trend");
  add_common(validate);
  validate->add_option("--band", band_arg, "Acceptance band lo,hi for the largest-level ratio");
  CLI::App* tail = app.add_subcommand("tail", "Trend-averaged Gaussian tail per level");
  add_common(tail);
  CLI::App* cache = app.add_subcommand("cache", "Cache maintenance");
  cache->add_option("action", cache_action, "list | clear | path")
      ->check(CLI::IsMember({"list", "clear", "path"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (!levels_arg.empty()) options.overrides.levels = parse_levels(levels_arg);
    if (!band_arg.empty()) {
      const auto comma = band_arg.find(',');
      if (comma == std::string::npos) throw brisk::ParseError("--band: expected lo,hi");
      options.band_lo = std::stod(band_arg.substr(0, comma));
      options.band_hi = std::stod(band_arg.substr(comma + 1));
    }
    if (qp->parsed()) return brisk::cli::cmd_qp(options);
    if (simulate->parsed()) return brisk::cli::cmd_simulate(options);
    if (asym->parsed()) return brisk::cli::cmd_asym(options);
    if (validate->parsed()) return brisk::cli::cmd_validate(options);
    if (tail->parsed()) return brisk::cli::cmd_tail(options);
    if (cache->parsed()) return brisk::cli::cmd_cache(cache_action);
  } catch (const brisk::Error& e) {
    std::cerr << "brisk: error: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "brisk: unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
