#pragma once

#include <cstdint>
#include <string>

#include "hardy/serialization.hpp"

namespace hardy::driver {

using io::json;

struct RunConfig {
  std::string command;    // compute-condition | verify | sweep | discretize
  std::string spec_path;  // read when spec is null
  json spec;              // inline spec document
  std::string out_path;   // empty: output is only returned
  std::string format = "json";
  Window window;
  int grid_points = 256;
  int atoms = 64;
  int levels = 2;
  std::uint64_t seed = 1;
  double ratio = 2;
};

// Keys: command, spec, spec_path, out, format, window [lo, hi], grid_points,
// atoms, levels, seed, ratio.  Anything else is rejected.
RunConfig config_from_json(const json& j);
json config_to_json(const RunConfig& c);

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 malformed input or failure, 2 hypotheses unmet
  std::string output;
  std::string message;  // diagnostics for stderr
};

// Never throws.
RunResult run(const RunConfig& config);

}  // namespace hardy::driver
