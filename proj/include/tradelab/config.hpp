#pragma once

// JSON experiment configuration.
//
//   {
//     "schema_version": 1,
//     "output_dir": "results",
//     "experiments": [
//       {"name": "sqrt", "env": {"family": "sqrt_lower", "eps": 0.5}, "algo": "fbp",
//        "feedback": "full", "T": [1024, 4096], "reps": 20, "seed": 7}
//     ]
//   }
//
// A file may also hold a single experiment's fields at the top level. "env"
// and "algo" accept either a family name or an object with a "family" key;
// with the string form, environment parameters may sit next to "env".

#include <string>
#include <vector>

#include "tradelab/harness.hpp"

namespace tradelab {

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::string output_dir = ".";
  std::vector<ExperimentConfig> experiments;
};

/// Throws ConfigError naming the offending field, e.g.
/// "experiments[0].reps: expected a positive integer".
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

/// Standalone "env" / "algo" values: a JSON string such as "\"fbp\"" or an
/// object such as {"family": "needle", "x": 0.4}. A bare family name without
/// quotes is accepted too.
EnvSpec parse_env_spec(const std::string& text);
AlgoSpec parse_algo_spec(const std::string& text);

}  // namespace tradelab
