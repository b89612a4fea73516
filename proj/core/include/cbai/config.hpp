#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cbai/harness.hpp"

namespace cbai {

struct SweepSpec {
  ParamAxis axis = ParamAxis::delta;
  std::vector<double> grid;
};

// A parsed config file: the experiment plus optional sweep/execution blocks.
struct LoadedConfig {
  ExperimentConfig experiment;
  std::optional<SweepSpec> sweep;
  int threads = 1;  // execution detail, never serialized into outputs
};

// Flat "key = value" sections: [instance], [contamination], [policy],
// [experiment], [sweep]. Unknown sections or keys are rejected.
LoadedConfig load_config_file(const std::string& path);
LoadedConfig parse_config(std::istream& in, const std::string& origin);

// Deterministic "key = value" lines describing the resolved experiment
// (post-overrides). Execution details like thread count are excluded so the
// rendering depends only on inputs that can change results.
std::vector<std::string> render_resolved(const ExperimentConfig& config);

}  // namespace cbai
