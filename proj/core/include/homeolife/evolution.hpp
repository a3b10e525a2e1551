#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "homeolife/grid.hpp"
#include "homeolife/random.hpp"
#include "homeolife/rules.hpp"

namespace homeolife {

enum class TaskKind {
  kReactiveProportional,  // R_p: target = d_I
  kReactiveInverse,       // R_i: target = 1 - d_I
  kHomeostasisHigh,       // H_h: target = 0.5
  kHomeostasisLow,        // H_l: target = 0.05
};

struct TaskSpec {
  TaskKind kind = TaskKind::kHomeostasisHigh;

  // Target density for a run started at initial density `d_initial`.
  double target(double d_initial) const;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

// Short CLI names: rp, ri, hh, hl.
std::string_view task_name(TaskKind kind);
std::optional<TaskKind> parse_task_name(std::string_view name);

struct GAConfig {
  int population_size = 30;
  int initial_rules_per_genome = 45;
  double bit_mutation_rate = 0.05;
  double crossover_rate = 0.01;
  double gene_dup_del_rate = 0.01;
  int elite_count = 5;
  int survivor_count = 15;
  double low_density = 0.0;
  double high_density = 0.5;
  int eval_steps = 500;
  StepWindow fitness_window{250, 500};
  int generations = 1000;
  std::uint64_t master_seed = 1;

  // Throws std::invalid_argument describing the first violated constraint.
  void validate() const;

  friend bool operator==(const GAConfig&, const GAConfig&) = default;
};

struct Individual {
  Genome genome;
  std::optional<double> fitness;
};

using Population = std::vector<Individual>;

struct GenerationRecord {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  std::size_t best_rule_count = 0;
  std::size_t population_size = 0;

  friend bool operator==(const GenerationRecord&,
                         const GenerationRecord&) = default;
};

struct EvolutionLog {
  std::vector<GenerationRecord> records;
};

// Fixed evaluation patterns shared by every fitness call of a run.
struct EvaluationSetup {
  TaskSpec task;
  Grid init_low;
  Grid init_high;
  GAConfig config;
};

// Window means of the target-area density for both starting patterns.
struct ConditionMeans {
  double low = 0.0;
  double high = 0.0;
};

ConditionMeans condition_means(const Genome& genome, const Grid& init_low,
                               const Grid& init_high, const GAConfig& cfg);

// Sum over both conditions of 1 - |mean - target|, in [0, 2].
double evaluate_fitness(const Genome& genome, const TaskSpec& task,
                        const Grid& init_low, const Grid& init_high,
                        const GAConfig& cfg);

// Fills in every missing fitness. Evaluation may run in parallel.
void evaluate_population(Population& population,
                         const EvaluationSetup& setup);

// Indices of the survivors: elites first in rank order (ties by lower
// index), then roulette picks without replacement in draw order.
std::vector<std::size_t> select_survivor_indices(
    std::span<const Individual> population, RandomStream& rng,
    int elite_count = 5, int survivor_count = 15);

std::vector<Individual> select_survivors(std::span<const Individual> population,
                                         RandomStream& rng,
                                         int elite_count = 5,
                                         int survivor_count = 15);

inline constexpr std::uint32_t kAllRuleBits = (1U << kSiteRuleBits) - 1;
inline constexpr std::uint32_t kConditionBitsOnly = TotalisticRule::kMask;

// Flips each bit selected by `bit_mask` independently with probability
// `rate`. Bit numbering follows pack_rule.
Genome mutate(const Genome& genome, double rate, RandomStream& rng,
              std::uint32_t bit_mask = kAllRuleBits);

// One-point crossover with independent cuts in each parent; gene count is
// conserved. No-op when either parent is empty.
std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b,
                                    RandomStream& rng);
// Crossover at explicit cut points (k_a in [0, |a|], k_b in [0, |b|]).
std::pair<Genome, Genome> crossover_at(const Genome& a, const Genome& b,
                                       std::size_t cut_a, std::size_t cut_b);

// With probability `rate`, duplicates (inserted right after) or deletes one
// uniformly chosen gene, each branch with probability 1/2.
Genome dup_delete(const Genome& genome, double rate, RandomStream& rng);

// How offspring are varied. Position-free runs use the defaults.
struct VariationScheme {
  std::uint32_t mutation_mask = kAllRuleBits;
  bool aligned_crossover = false;  // same cut in both parents
  bool gene_dup_del = true;
};

Population next_generation(const Population& population,
                           const EvaluationSetup& setup, RandomStream& rng,
                           const VariationScheme& scheme = {});

Genome random_genome(std::size_t rule_count, RandomStream& rng);

enum class FixedLayout { kFull, kChecker };

std::string_view layout_name(FixedLayout layout);
std::optional<FixedLayout> parse_layout_name(std::string_view name);

// Canonical site list: row-major over the genome area, checker keeps
// sites with even local_x + local_y.
std::vector<std::pair<std::uint8_t, std::uint8_t>> layout_sites(
    FixedLayout layout);

Genome random_fixed_genome(FixedLayout layout, RandomStream& rng);

struct EvolutionResult {
  Individual best;
  EvolutionLog log;
  Grid init_low;
  Grid init_high;
};

// The two fixed evaluation patterns derived from the master seed.
std::pair<Grid, Grid> evaluation_patterns(const GAConfig& cfg);

EvolutionResult evolve(const TaskSpec& task, const GAConfig& cfg);
EvolutionResult evolve_fixed(const TaskSpec& task, FixedLayout layout,
                             const GAConfig& cfg);

}  // namespace homeolife
