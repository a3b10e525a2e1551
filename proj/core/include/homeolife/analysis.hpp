#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "homeolife/evolution.hpp"
#include "homeolife/grid.hpp"
#include "homeolife/random.hpp"
#include "homeolife/rules.hpp"

namespace homeolife {

// Bias statistics range over the 16 conditions with 1..8 live neighbours;
// the zero-neighbour conditions still act in the dynamics.
inline constexpr int kBiasConditions = 16;

// Fraction of the 16 conditions that output state 1.
double output_bias(TotalisticRule rule);

// Mean of n/8 over the conditions that output state 1; nullopt if none do.
std::optional<double> input_bias(TotalisticRule rule);

struct RuleBias {
  int x = 0;  // absolute coordinates
  int y = 0;
  double output_bias = 0.0;
  std::optional<double> input_bias;
};

inline constexpr int kBiasHistogramBins = 10;

struct BiasMap {
  std::vector<RuleBias> rules;
  // Bins of width 0.1 over [0, 1]; 1.0 falls in the last bin.
  std::array<int, kBiasHistogramBins> output_histogram{};
  std::array<int, kBiasHistogramBins> input_histogram{};
};

BiasMap bias_map(const Genome& genome);

struct KnockoutRecord {
  std::size_t rule_index = 0;
  int x = 0;
  int y = 0;
  // Window-mean density without the rule minus with it; positive means the
  // rule suppresses live cells.
  double delta_low = 0.0;
  double delta_high = 0.0;
};

Genome without_rule(const Genome& genome, std::size_t index);

std::vector<KnockoutRecord> knockout_scan(const Genome& genome,
                                          const Grid& init_low,
                                          const Grid& init_high,
                                          const GAConfig& cfg);

// Keeps every rule table and the genome order; redraws each site uniformly.
Genome randomize_positions(const Genome& genome, RandomStream& rng);

struct SweepRecord {
  double initial_density = 0.0;
  // Per-sample mean of the target-area density over steps 1..steps.
  std::vector<double> sample_means;
  double average = 0.0;
};

struct SweepOptions {
  int samples_per_density = 100;
  int steps = 500;
  std::uint64_t seed = 1;
  // Redraw rule positions independently for every sample.
  bool randomize_positions = false;
};

// Mean target-area density over steps 1..steps (initial state excluded).
double run_mean_density(const Grid& grid0, const CompiledGenome& genome,
                        int steps);

// Sample j at density index i uses streams derived from (seed, i, j), so
// the result does not depend on evaluation order.
std::vector<SweepRecord> generalization_sweep(const Genome& genome,
                                              std::span<const double> densities,
                                              const SweepOptions& options);

struct AttractorRow {
  double initial_density = 0.0;
  std::vector<int> counts;
};

// Equal-width bins over [0, 1]; 1.0 falls in the last bin.
std::vector<AttractorRow> attractor_histogram(
    std::span<const SweepRecord> sweep, int bins = 50);

// 0, 0.1, ..., 1.0
std::vector<double> default_sweep_densities();

}  // namespace homeolife
