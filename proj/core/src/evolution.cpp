#include "homeolife/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "homeolife/parallel.hpp"

namespace homeolife {

double TaskSpec::target(double d_initial) const {
  switch (kind) {
    case TaskKind::kReactiveProportional:
      return d_initial;
    case TaskKind::kReactiveInverse:
      return 1.0 - d_initial;
    case TaskKind::kHomeostasisHigh:
      return 0.5;
    case TaskKind::kHomeostasisLow:
      return 0.05;
  }
  return 0.0;
}

std::string_view task_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::kReactiveProportional:
      return "rp";
    case TaskKind::kReactiveInverse:
      return "ri";
    case TaskKind::kHomeostasisHigh:
      return "hh";
    case TaskKind::kHomeostasisLow:
      return "hl";
  }
  return "?";
}

std::optional<TaskKind> parse_task_name(std::string_view name) {
  for (auto kind : {TaskKind::kReactiveProportional, TaskKind::kReactiveInverse,
                    TaskKind::kHomeostasisHigh, TaskKind::kHomeostasisLow}) {
    if (task_name(kind) == name) return kind;
  }
  return std::nullopt;
}

void GAConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  require(population_size >= 1, "population_size must be positive");
  require(initial_rules_per_genome >= 0,
          "initial_rules_per_genome must be non-negative");
  require(unit(bit_mutation_rate), "bit_mutation_rate must lie in [0, 1]");
  require(unit(crossover_rate), "crossover_rate must lie in [0, 1]");
  require(unit(gene_dup_del_rate), "gene_dup_del_rate must lie in [0, 1]");
  require(unit(low_density), "low_density must lie in [0, 1]");
  require(unit(high_density), "high_density must lie in [0, 1]");
  require(elite_count >= 0 && elite_count <= survivor_count,
          "elite_count must lie in [0, survivor_count]");
  require(survivor_count >= 1 && survivor_count <= population_size,
          "survivor_count must lie in [1, population_size]");
  require(eval_steps >= 1, "eval_steps must be positive");
  require(fitness_window.begin >= 0 &&
              fitness_window.begin < fitness_window.end &&
              fitness_window.end <= eval_steps,
          "fitness window must satisfy 0 <= begin < end <= eval_steps");
  require(generations >= 0, "generations must be non-negative");
}

ConditionMeans condition_means(const Genome& genome, const Grid& init_low,
                               const Grid& init_high, const GAConfig& cfg) {
  const CompiledGenome compiled(genome);
  return {window_mean_density(init_low, compiled, cfg.fitness_window),
          window_mean_density(init_high, compiled, cfg.fitness_window)};
}

double evaluate_fitness(const Genome& genome, const TaskSpec& task,
                        const Grid& init_low, const Grid& init_high,
                        const GAConfig& cfg) {
  const ConditionMeans m = condition_means(genome, init_low, init_high, cfg);
  return (1.0 - std::abs(m.low - task.target(cfg.low_density))) +
         (1.0 - std::abs(m.high - task.target(cfg.high_density)));
}

void evaluate_population(Population& population,
                         const EvaluationSetup& setup) {
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (!population[i].fitness) pending.push_back(i);
  }
  parallel_for(pending.size(), [&](std::size_t k) {
    auto& ind = population[pending[k]];
    ind.fitness = evaluate_fitness(ind.genome, setup.task, setup.init_low,
                                   setup.init_high, setup.config);
  });
}

std::vector<std::size_t> select_survivor_indices(
    std::span<const Individual> population, RandomStream& rng,
    int elite_count, int survivor_count) {
  const std::size_t n = population.size();
  const auto want = std::min<std::size_t>(survivor_count, n);
  auto fitness_of = [&](std::size_t i) {
    return population[i].fitness.value_or(0.0);
  };

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return fitness_of(a) > fitness_of(b);
                   });

  const auto elites = std::min<std::size_t>(elite_count, want);
  std::vector<std::size_t> chosen(order.begin(), order.begin() + elites);

  std::vector<std::size_t> pool(order.begin() + elites, order.end());
  std::sort(pool.begin(), pool.end());
  while (chosen.size() < want) {
    double total = 0.0;
    for (std::size_t i : pool) total += std::max(0.0, fitness_of(i));

    std::size_t pick = 0;
    if (total <= 0.0) {
      pick = rng.uniform_below(pool.size());
    } else {
      const double u = rng.uniform01() * total;
      double acc = 0.0;
      pick = pool.size();
      std::size_t last_positive = 0;
      for (std::size_t k = 0; k < pool.size(); ++k) {
        const double f = std::max(0.0, fitness_of(pool[k]));
        if (f > 0.0) last_positive = k;
        acc += f;
        if (u < acc) {
          pick = k;
          break;
        }
      }
      if (pick == pool.size()) pick = last_positive;
    }
    chosen.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return chosen;
}

std::vector<Individual> select_survivors(std::span<const Individual> population,
                                         RandomStream& rng, int elite_count,
                                         int survivor_count) {
  std::vector<Individual> out;
  for (std::size_t i :
       select_survivor_indices(population, rng, elite_count, survivor_count)) {
    out.push_back(population[i]);
  }
  return out;
}

Genome mutate(const Genome& genome, double rate, RandomStream& rng,
              std::uint32_t bit_mask) {
  Genome out = genome;
  for (auto& rule : out.rules) {
    std::uint32_t bits = pack_rule(rule);
    for (int b = 0; b < kSiteRuleBits; ++b) {
      if (!((bit_mask >> b) & 1U)) continue;
      if (rng.bernoulli(rate)) bits ^= 1U << b;
    }
    rule = unpack_rule(bits);
  }
  return out;
}

std::pair<Genome, Genome> crossover_at(const Genome& a, const Genome& b,
                                       std::size_t cut_a, std::size_t cut_b) {
  cut_a = std::min(cut_a, a.size());
  cut_b = std::min(cut_b, b.size());
  Genome first;
  Genome second;
  first.rules.reserve(cut_a + b.size() - cut_b);
  second.rules.reserve(cut_b + a.size() - cut_a);
  first.rules.insert(first.rules.end(), a.rules.begin(),
                     a.rules.begin() + static_cast<std::ptrdiff_t>(cut_a));
  first.rules.insert(first.rules.end(),
                     b.rules.begin() + static_cast<std::ptrdiff_t>(cut_b),
                     b.rules.end());
  second.rules.insert(second.rules.end(), b.rules.begin(),
                      b.rules.begin() + static_cast<std::ptrdiff_t>(cut_b));
  second.rules.insert(second.rules.end(),
                      a.rules.begin() + static_cast<std::ptrdiff_t>(cut_a),
                      a.rules.end());
  return {std::move(first), std::move(second)};
}

std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b,
                                    RandomStream& rng) {
  if (a.empty() || b.empty()) return {a, b};
  const std::size_t cut_a = rng.uniform_below(a.size() + 1);
  const std::size_t cut_b = rng.uniform_below(b.size() + 1);
  return crossover_at(a, b, cut_a, cut_b);
}

Genome dup_delete(const Genome& genome, double rate, RandomStream& rng) {
  if (genome.empty()) return genome;
  if (!rng.bernoulli(rate)) return genome;
  Genome out = genome;
  const auto index =
      static_cast<std::ptrdiff_t>(rng.uniform_below(genome.size()));
  if (rng.bernoulli(0.5)) {
    out.rules.insert(out.rules.begin() + index + 1, out.rules[index]);
  } else {
    out.rules.erase(out.rules.begin() + index);
  }
  return out;
}

Population next_generation(const Population& population,
                           const EvaluationSetup& setup, RandomStream& rng,
                           const VariationScheme& scheme) {
  const GAConfig& cfg = setup.config;
  Population next = select_survivors(population, rng, cfg.elite_count,
                                     cfg.survivor_count);
  const std::size_t survivors = next.size();
  const std::size_t offspring_count =
      static_cast<std::size_t>(cfg.population_size) - survivors;

  std::vector<Genome> offspring;
  offspring.reserve(offspring_count);
  for (std::size_t i = 0; i < offspring_count; ++i) {
    offspring.push_back(next[i % survivors].genome);
  }

  for (std::size_t i = 0; i + 1 < offspring.size(); i += 2) {
    if (!rng.bernoulli(cfg.crossover_rate)) continue;
    auto& a = offspring[i];
    auto& b = offspring[i + 1];
    if (scheme.aligned_crossover) {
      if (a.empty() || b.empty()) continue;
      const std::size_t cut =
          rng.uniform_below(std::min(a.size(), b.size()) + 1);
      std::tie(a, b) = crossover_at(a, b, cut, cut);
    } else {
      std::tie(a, b) = crossover(a, b, rng);
    }
  }

  for (auto& child : offspring) {
    child = mutate(child, cfg.bit_mutation_rate, rng, scheme.mutation_mask);
    if (scheme.gene_dup_del) {
      child = dup_delete(child, cfg.gene_dup_del_rate, rng);
    }
    next.push_back({std::move(child), std::nullopt});
  }

  evaluate_population(next, setup);
  return next;
}

Genome random_genome(std::size_t rule_count, RandomStream& rng) {
  Genome genome;
  genome.rules.reserve(rule_count);
  for (std::size_t i = 0; i < rule_count; ++i) {
    genome.rules.push_back(
        unpack_rule(static_cast<std::uint32_t>(rng()) & kAllRuleBits));
  }
  return genome;
}

std::string_view layout_name(FixedLayout layout) {
  return layout == FixedLayout::kFull ? "full" : "checker";
}

std::optional<FixedLayout> parse_layout_name(std::string_view name) {
  if (name == "full") return FixedLayout::kFull;
  if (name == "checker") return FixedLayout::kChecker;
  return std::nullopt;
}

std::vector<std::pair<std::uint8_t, std::uint8_t>> layout_sites(
    FixedLayout layout) {
  std::vector<std::pair<std::uint8_t, std::uint8_t>> sites;
  for (int y = 0; y < kGenomeArea.height; ++y) {
    for (int x = 0; x < kGenomeArea.width; ++x) {
      if (layout == FixedLayout::kChecker && (x + y) % 2 != 0) continue;
      sites.emplace_back(static_cast<std::uint8_t>(x),
                         static_cast<std::uint8_t>(y));
    }
  }
  return sites;
}

Genome random_fixed_genome(FixedLayout layout, RandomStream& rng) {
  Genome genome;
  for (auto [x, y] : layout_sites(layout)) {
    const auto table = static_cast<std::uint32_t>(rng()) & TotalisticRule::kMask;
    genome.rules.push_back({TotalisticRule(table), x, y});
  }
  return genome;
}

std::pair<Grid, Grid> evaluation_patterns(const GAConfig& cfg) {
  auto low_rng = derive_stream(cfg.master_seed, "init_low");
  auto high_rng = derive_stream(cfg.master_seed, "init_high");
  return {random_grid(cfg.low_density, low_rng),
          random_grid(cfg.high_density, high_rng)};
}

namespace {

GenerationRecord summarize(int generation, const Population& population) {
  GenerationRecord record;
  record.generation = generation;
  std::size_t best = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < population.size(); ++i) {
    const double f = population[i].fitness.value_or(0.0);
    sum += f;
    if (f > population[best].fitness.value_or(0.0)) best = i;
  }
  record.best_fitness = population[best].fitness.value_or(0.0);
  record.mean_fitness = sum / static_cast<double>(population.size());
  record.best_rule_count = population[best].genome.size();
  record.population_size = population.size();
  return record;
}

const Individual& fittest(const Population& population) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < population.size(); ++i) {
    if (population[i].fitness.value_or(0.0) >
        population[best].fitness.value_or(0.0)) {
      best = i;
    }
  }
  return population[best];
}

template <typename MakeGenome>
EvolutionResult run_ga(const TaskSpec& task, const GAConfig& cfg,
                       MakeGenome make_genome, const VariationScheme& scheme) {
  cfg.validate();
  auto [init_low, init_high] = evaluation_patterns(cfg);
  const EvaluationSetup setup{task, init_low, init_high, cfg};

  auto init_rng = derive_stream(cfg.master_seed, "population");
  Population population;
  population.reserve(static_cast<std::size_t>(cfg.population_size));
  for (int i = 0; i < cfg.population_size; ++i) {
    population.push_back({make_genome(init_rng), std::nullopt});
  }
  evaluate_population(population, setup);

  EvolutionResult result;
  result.log.records.push_back(summarize(0, population));
  auto ga_rng = derive_stream(cfg.master_seed, "ga");
  for (int g = 1; g <= cfg.generations; ++g) {
    population = next_generation(population, setup, ga_rng, scheme);
    result.log.records.push_back(summarize(g, population));
  }
  result.best = fittest(population);
  result.init_low = init_low;
  result.init_high = init_high;
  return result;
}

}  // namespace

EvolutionResult evolve(const TaskSpec& task, const GAConfig& cfg) {
  const auto rules = static_cast<std::size_t>(cfg.initial_rules_per_genome);
  return run_ga(
      task, cfg,
      [rules](RandomStream& rng) { return random_genome(rules, rng); }, {});
}

EvolutionResult evolve_fixed(const TaskSpec& task, FixedLayout layout,
                             const GAConfig& cfg) {
  const VariationScheme scheme{kConditionBitsOnly, true, false};
  return run_ga(
      task, cfg,
      [layout](RandomStream& rng) { return random_fixed_genome(layout, rng); },
      scheme);
}

}  // namespace homeolife
