#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdopt/design_space.hpp"
#include "rdopt/objectives.hpp"
#include "rdopt/optimizer.hpp"

namespace rdopt {

// Aggregated run settings.  Deviations in the optimizer block are expressed
// in internal units (per-axis target = 1); the physical per-axis deviations
// live on the axes themselves.
struct RunConfig {
  std::vector<AxisSpec> axes;
  MoveLimitConfig optimizer;
  std::int64_t samples = 1 << 16;
  std::int64_t skip = 0;
  ObjectiveConfig objective;
  std::uint64_t seed = 0;
  int runs = 1;
  int workers = 1;
  std::string out_dir = "out";

  DesignSpace make_space() const { return DesignSpace(axes); }
  void validate() const;
};

// Sectioned key = value text.  Unknown sections or keys are rejected;
// `overrides` entries take the form "section.key=value" and are applied
// before interpretation.
RunConfig load_config_text(const std::string& text,
                           const std::vector<std::string>& overrides = {});
RunConfig load_config_file(const std::string& path,
                           const std::vector<std::string>& overrides = {});

// Effective settings rendered back in the accepted input format; loading the
// result reproduces the configuration exactly.
std::string render_config(const RunConfig& cfg);

}  // namespace rdopt
