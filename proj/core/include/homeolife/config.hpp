#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "homeolife/evolution.hpp"

namespace homeolife {

// Error in configuration text; line() is 1-based (0 when not line-bound).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct ExperimentConfig {
  GAConfig ga;
  TaskKind task = TaskKind::kHomeostasisHigh;
  FixedLayout layout = FixedLayout::kFull;
  std::vector<double> sweep_densities = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                         0.6, 0.7, 0.8, 0.9, 1.0};
  int sweep_samples = 100;
  int sweep_steps = 500;
  int histogram_bins = 50;
  std::string output_dir;
  // Analyses run on the best genome right after an evolve command.
  bool analyze_bias = false;
  bool analyze_knockout = false;
  bool analyze_sweep = false;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// Parses `key = value` lines. Blank lines and text after '#' are ignored.
// Missing keys keep their defaults; unknown keys, malformed lines and
// out-of-range values raise ConfigError.
ExperimentConfig parse_config(std::string_view text);

// Every key in a fixed order; parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& config);

// Names accepted by parse_config, in emission order.
const std::vector<std::string>& config_keys();

}  // namespace homeolife
