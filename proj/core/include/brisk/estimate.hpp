#pragma once

#include <cstdint>
#include <string>

namespace brisk {

// Point estimate with its standard error; the return type of every
// stochastic operation in the library. `meta` is a short method
// descriptor ("plain-mc", "tilted", grid sizes, ...).
struct EstimateWithCI {
  double point = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  std::string meta;
};

}  // namespace brisk
