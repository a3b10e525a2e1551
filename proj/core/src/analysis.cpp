#include "homeolife/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "homeolife/parallel.hpp"

namespace homeolife {

namespace {

// Counts outputs over n = 1..8 for both own states. Returns (ones, sum of n).
std::pair<int, int> tally(TotalisticRule rule) {
  int ones = 0;
  int neighbour_sum = 0;
  for (int own = 0; own <= 1; ++own) {
    for (int n = 1; n <= 8; ++n) {
      if (rule.output(own != 0, n)) {
        ++ones;
        neighbour_sum += n;
      }
    }
  }
  return {ones, neighbour_sum};
}

int unit_bin(double value, int bins) {
  const auto b = static_cast<int>(std::floor(value * bins + 1e-9));
  return std::clamp(b, 0, bins - 1);
}

}  // namespace

double output_bias(TotalisticRule rule) {
  return static_cast<double>(tally(rule).first) / kBiasConditions;
}

std::optional<double> input_bias(TotalisticRule rule) {
  const auto [ones, neighbour_sum] = tally(rule);
  if (ones == 0) return std::nullopt;
  return static_cast<double>(neighbour_sum) / (8.0 * ones);
}

BiasMap bias_map(const Genome& genome) {
  BiasMap map;
  map.rules.reserve(genome.size());
  for (const auto& r : genome.rules) {
    RuleBias bias{r.x(), r.y(), output_bias(r.rule), input_bias(r.rule)};
    ++map.output_histogram[unit_bin(bias.output_bias, kBiasHistogramBins)];
    if (bias.input_bias) {
      ++map.input_histogram[unit_bin(*bias.input_bias, kBiasHistogramBins)];
    }
    map.rules.push_back(bias);
  }
  return map;
}

Genome without_rule(const Genome& genome, std::size_t index) {
  Genome out = genome;
  out.rules.erase(out.rules.begin() + static_cast<std::ptrdiff_t>(index));
  return out;
}

std::vector<KnockoutRecord> knockout_scan(const Genome& genome,
                                          const Grid& init_low,
                                          const Grid& init_high,
                                          const GAConfig& cfg) {
  const ConditionMeans full = condition_means(genome, init_low, init_high, cfg);
  std::vector<KnockoutRecord> records(genome.size());
  parallel_for(genome.size(), [&](std::size_t i) {
    const ConditionMeans reduced =
        condition_means(without_rule(genome, i), init_low, init_high, cfg);
    records[i] = {i, genome.rules[i].x(), genome.rules[i].y(),
                  reduced.low - full.low, reduced.high - full.high};
  });
  return records;
}

Genome randomize_positions(const Genome& genome, RandomStream& rng) {
  Genome out = genome;
  for (auto& r : out.rules) {
    r.local_x = static_cast<std::uint8_t>(rng.uniform_below(kGenomeArea.width));
    r.local_y =
        static_cast<std::uint8_t>(rng.uniform_below(kGenomeArea.height));
  }
  return out;
}

double run_mean_density(const Grid& grid0, const CompiledGenome& genome,
                        int steps) {
  Grid grid = grid0;
  long long live = 0;
  for (int t = 1; t <= steps; ++t) {
    grid = coupled_step(grid, genome);
    live += grid.population(kTargetArea);
  }
  return static_cast<double>(live) /
         (static_cast<double>(kTargetArea.area()) * steps);
}

std::vector<SweepRecord> generalization_sweep(const Genome& genome,
                                              std::span<const double> densities,
                                              const SweepOptions& options) {
  if (options.samples_per_density < 1 || options.steps < 1) {
    throw std::invalid_argument("sweep needs at least one sample and step");
  }
  for (double d : densities) {
    if (!(d >= 0.0 && d <= 1.0)) {
      throw std::invalid_argument("sweep densities must lie in [0, 1]");
    }
  }
  const auto samples = static_cast<std::size_t>(options.samples_per_density);
  std::vector<SweepRecord> records(densities.size());
  for (std::size_t i = 0; i < densities.size(); ++i) {
    records[i].initial_density = densities[i];
    records[i].sample_means.resize(samples);
  }
  const CompiledGenome compiled(genome);

  parallel_for(densities.size() * samples, [&](std::size_t job) {
    const std::size_t i = job / samples;
    const std::size_t j = job % samples;
    auto grid_rng = derive_stream(options.seed, "sweep", {i, j});
    const Grid grid0 = random_grid(densities[i], grid_rng);
    double mean = 0.0;
    if (options.randomize_positions) {
      auto pos_rng = derive_stream(options.seed, "randomize", {i, j});
      mean = run_mean_density(
          grid0, CompiledGenome(randomize_positions(genome, pos_rng)),
          options.steps);
    } else {
      mean = run_mean_density(grid0, compiled, options.steps);
    }
    records[i].sample_means[j] = mean;
  });

  for (auto& r : records) {
    double sum = 0.0;
    for (double m : r.sample_means) sum += m;
    r.average = sum / static_cast<double>(r.sample_means.size());
  }
  return records;
}

std::vector<AttractorRow> attractor_histogram(
    std::span<const SweepRecord> sweep, int bins) {
  if (bins < 1) throw std::invalid_argument("bins must be at least 1");
  std::vector<AttractorRow> rows;
  rows.reserve(sweep.size());
  for (const auto& record : sweep) {
    AttractorRow row{record.initial_density,
                     std::vector<int>(static_cast<std::size_t>(bins), 0)};
    for (double m : record.sample_means) ++row.counts[unit_bin(m, bins)];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> default_sweep_densities() {
  std::vector<double> out;
  for (int i = 0; i <= 10; ++i) out.push_back(i / 10.0);
  return out;
}

}  // namespace homeolife
