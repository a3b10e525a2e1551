#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "homeolife/analysis.hpp"
#include "homeolife/config.hpp"
#include "homeolife/evolution.hpp"
#include "homeolife/io.hpp"
#include "homeolife/random.hpp"

namespace homeolife::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string task;
  std::string out_dir;
  bool force = false;
  std::string genome_path;
  std::vector<int> dump_steps;
  std::optional<double> density;
  std::string init_grid;
  std::string condition = "high";
  std::optional<int> steps;
  std::string layout;
  std::optional<int> generations;
  std::optional<int> samples;
  std::vector<double> densities;
  std::optional<int> bins;
  bool randomized_sweep = false;
};

// Output sink: a directory of artifacts plus manifest, or stdout for the
// primary table when no directory was requested.
// The output directory is left out so that identical runs written to
// different places produce identical files.
std::string echoed_config(ExperimentConfig config) {
  config.output_dir.clear();
  return emit_config(config);
}

class Sink {
 public:
  Sink(const ExperimentConfig& config, std::string subcommand, bool force,
       std::ostream& out)
      : config_(config), subcommand_(std::move(subcommand)), out_(out) {
    if (config.output_dir.empty()) return;
    const fs::path dir(config.output_dir);
    if (fs::exists(dir) && !force) {
      throw UsageError(fmt::format(
          "output directory '{}' already exists (use --force to overwrite)",
          dir.string()));
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
      throw UsageError(fmt::format("cannot create output directory '{}': {}",
                                   dir.string(), ec.message()));
    }
    writer_.emplace(dir);
  }

  bool to_directory() const { return writer_.has_value(); }

  // Primary tables are echoed to stdout when there is no directory.
  void primary(const std::string& name, std::string_view content) {
    if (writer_) {
      writer_->write(name, content);
    } else {
      out_ << content;
    }
  }

  // Secondary artifacts only exist in directory mode.
  void extra(const std::string& name, std::string_view content) {
    if (writer_) writer_->write(name, content);
  }

  void finish() {
    if (!writer_) return;
    RunManifest manifest;
    manifest.tool_version = std::string(tool_version());
    manifest.subcommand = subcommand_;
    manifest.seed = config_.ga.master_seed;
    manifest.config = echoed_config(config_);
    manifest.artifacts = writer_->entries();
    write_text_file(writer_->directory() / "manifest.json", manifest.to_json());
  }

 private:
  const ExperimentConfig& config_;
  std::string subcommand_;
  std::ostream& out_;
  std::optional<ArtifactWriter> writer_;
};

std::optional<std::uint64_t> metadata_seed(const GenomeFile& file) {
  const std::string text = file.find("seed");
  if (text.empty()) return std::nullopt;
  std::uint64_t seed = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError("genome metadata has a malformed seed: " + text);
  }
  return seed;
}

GenomeFile require_genome(const Options& opt) {
  if (opt.genome_path.empty()) throw UsageError("--genome is required");
  if (!fs::exists(opt.genome_path)) {
    throw UsageError("genome file not found: " + opt.genome_path);
  }
  return load_genome(opt.genome_path);
}

ExperimentConfig build_config(const Options& opt) {
  ExperimentConfig config;
  if (!opt.config_path.empty()) {
    if (!fs::exists(opt.config_path)) {
      throw UsageError("config file not found: " + opt.config_path);
    }
    config = parse_config(read_text_file(opt.config_path));
  }
  if (opt.seed) config.ga.master_seed = *opt.seed;
  if (!opt.task.empty()) config.task = *parse_task_name(opt.task);
  if (!opt.layout.empty()) config.layout = *parse_layout_name(opt.layout);
  if (!opt.out_dir.empty()) config.output_dir = opt.out_dir;
  if (opt.generations) config.ga.generations = *opt.generations;
  if (opt.samples) config.sweep_samples = *opt.samples;
  if (opt.bins) config.histogram_bins = *opt.bins;
  if (!opt.densities.empty()) config.sweep_densities = opt.densities;
  config.ga.validate();
  return config;
}

Metadata genome_metadata(const ExperimentConfig& config,
                         const EvolutionResult& result,
                         std::optional<FixedLayout> layout) {
  const ConditionMeans m = condition_means(
      result.best.genome, result.init_low, result.init_high, config.ga);
  Metadata meta{{"task", std::string(task_name(config.task))},
                {"seed", fmt::format("{}", config.ga.master_seed)},
                {"generations", fmt::format("{}", config.ga.generations)},
                {"fitness", fmt::format("{}", result.best.fitness.value_or(0))},
                {"mean_low", fmt::format("{}", m.low)},
                {"mean_high", fmt::format("{}", m.high)},
                {"rules", fmt::format("{}", result.best.genome.size())}};
  if (layout) meta.emplace_back("layout", std::string(layout_name(*layout)));
  meta.emplace_back("tool_version", std::string(tool_version()));
  return meta;
}

void write_sweep(Sink& sink, const std::string& prefix,
                 const std::vector<SweepRecord>& sweep,
                 const ExperimentConfig& config, bool primary) {
  const auto histogram = attractor_histogram(sweep, config.histogram_bins);
  if (primary) {
    sink.primary(prefix + "sweep.csv", sweep_csv(sweep));
  } else {
    sink.extra(prefix + "sweep.csv", sweep_csv(sweep));
  }
  sink.extra(prefix + "histogram.csv", attractor_histogram_csv(histogram));
}

SweepOptions sweep_options(const ExperimentConfig& config) {
  return {config.sweep_samples, config.sweep_steps, config.ga.master_seed,
          false};
}

void run_post_analyses(Sink& sink, const ExperimentConfig& config,
                       const EvolutionResult& result) {
  if (config.analyze_bias) {
    const BiasMap map = bias_map(result.best.genome);
    sink.extra("bias.csv", bias_csv(map));
    sink.extra("bias_histogram.csv", bias_histogram_csv(map));
  }
  if (config.analyze_knockout) {
    sink.extra("knockout.csv",
               knockout_csv(knockout_scan(result.best.genome, result.init_low,
                                          result.init_high, config.ga)));
  }
  if (config.analyze_sweep) {
    write_sweep(sink, "",
                generalization_sweep(result.best.genome,
                                     config.sweep_densities,
                                     sweep_options(config)),
                config, false);
    write_sweep(sink, "baseline_",
                generalization_sweep(Genome{}, config.sweep_densities,
                                     sweep_options(config)),
                config, false);
  }
}

void cmd_evolve(const Options& opt, std::ostream& out, bool fixed) {
  const ExperimentConfig config = build_config(opt);
  const std::string name = fixed ? "evolve-fixed" : "evolve";
  Sink sink(config, name, opt.force, out);
  const TaskSpec task{config.task};
  const EvolutionResult result = fixed
                                     ? evolve_fixed(task, config.layout, config.ga)
                                     : evolve(task, config.ga);
  sink.primary("log.csv", evolution_log_csv(result.log));
  sink.extra("best_genome.txt",
             format_genome(result.best.genome,
                           genome_metadata(config, result,
                                           fixed ? std::optional(config.layout)
                                                 : std::nullopt)));
  sink.extra("config.txt", echoed_config(config));
  run_post_analyses(sink, config, result);
  sink.finish();
}

void cmd_rollout(const Options& opt, std::ostream& out) {
  Genome genome;
  std::optional<std::uint64_t> seed_from_genome;
  if (!opt.genome_path.empty()) {
    const GenomeFile file = require_genome(opt);
    genome = file.genome;
    seed_from_genome = metadata_seed(file);
  }
  ExperimentConfig config = build_config(opt);
  if (!opt.seed && seed_from_genome) config.ga.master_seed = *seed_from_genome;
  if (!opt.dump_steps.empty() && config.output_dir.empty()) {
    throw UsageError("--dump-steps requires --out");
  }
  const int steps = opt.steps.value_or(config.ga.eval_steps);
  if (steps < 1) throw UsageError("--steps must be positive");
  for (int s : opt.dump_steps) {
    if (s < 0 || s > steps) {
      throw UsageError(fmt::format("dump step {} outside [0, {}]", s, steps));
    }
  }

  Grid grid0;
  if (opt.density) {
    auto rng = derive_stream(config.ga.master_seed, "rollout");
    grid0 = random_grid(*opt.density, rng);
  } else if (!opt.init_grid.empty()) {
    grid0 = parse_grid_dump(read_text_file(opt.init_grid));
  } else {
    const auto [low, high] = evaluation_patterns(config.ga);
    grid0 = opt.condition == "low" ? low : high;
  }

  std::vector<int> dumps = opt.dump_steps;
  std::sort(dumps.begin(), dumps.end());
  dumps.erase(std::unique(dumps.begin(), dumps.end()), dumps.end());

  Sink sink(config, "rollout", opt.force, out);
  const Trajectory trajectory = rollout(grid0, genome, steps, dumps);
  sink.primary("trajectory.csv", trajectory_csv(trajectory));
  for (const auto& snap : trajectory.snapshots) {
    sink.extra(fmt::format("grid_{:04}.txt", snap.step), dump_grid(snap.grid));
  }
  sink.finish();
}

void cmd_bias(const Options& opt, std::ostream& out) {
  const GenomeFile file = require_genome(opt);
  const ExperimentConfig config = build_config(opt);
  Sink sink(config, "bias", opt.force, out);
  const BiasMap map = bias_map(file.genome);
  sink.primary("bias.csv", bias_csv(map));
  sink.extra("bias_histogram.csv", bias_histogram_csv(map));
  sink.finish();
}

void cmd_knockout(const Options& opt, std::ostream& out) {
  const GenomeFile file = require_genome(opt);
  ExperimentConfig config = build_config(opt);
  if (!opt.seed) {
    if (auto s = metadata_seed(file)) config.ga.master_seed = *s;
  }
  Sink sink(config, "knockout", opt.force, out);
  const auto [low, high] = evaluation_patterns(config.ga);
  sink.primary("knockout.csv",
               knockout_csv(knockout_scan(file.genome, low, high, config.ga)));
  sink.finish();
}

void cmd_randomize(const Options& opt, std::ostream& out) {
  const GenomeFile file = require_genome(opt);
  const ExperimentConfig config = build_config(opt);
  if (opt.randomized_sweep && config.output_dir.empty()) {
    throw UsageError("--sweep requires --out");
  }
  Sink sink(config, "randomize", opt.force, out);
  auto rng = derive_stream(config.ga.master_seed, "randomize-genome");
  const Genome shuffled = randomize_positions(file.genome, rng);
  Metadata meta = file.metadata;
  meta.emplace_back("randomized_seed",
                    fmt::format("{}", config.ga.master_seed));
  sink.primary("randomized_genome.txt", format_genome(shuffled, meta));
  if (opt.randomized_sweep) {
    SweepOptions options = sweep_options(config);
    options.randomize_positions = true;
    write_sweep(sink, "randomized_",
                generalization_sweep(file.genome, config.sweep_densities,
                                     options),
                config, false);
  }
  sink.finish();
}

void cmd_sweep(const Options& opt, std::ostream& out) {
  Genome genome;
  if (!opt.genome_path.empty()) genome = require_genome(opt).genome;
  ExperimentConfig config = build_config(opt);
  if (opt.steps) config.sweep_steps = *opt.steps;
  Sink sink(config, "sweep", opt.force, out);
  write_sweep(sink, "",
              generalization_sweep(genome, config.sweep_densities,
                                   sweep_options(config)),
              config, true);
  if (sink.to_directory()) {
    write_sweep(sink, "baseline_",
                generalization_sweep(Genome{}, config.sweep_densities,
                                     sweep_options(config)),
                config, false);
  }
  sink.finish();
}

}  // namespace

int run_subcommand(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Two-layer Game of Life with evolvable override rules"};
  app.name("homeolife");
  app.require_subcommand(1);
  Options opt;

  const auto task_check = CLI::IsMember({"rp", "ri", "hh", "hl"});
  const auto unit = CLI::Range(0.0, 1.0);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Configuration file (key = value)");
    sub->add_option("--seed", opt.seed, "Master seed");
    sub->add_option("--out", opt.out_dir,
                    "Output directory (tables go to stdout when omitted)");
    sub->add_flag("--force", opt.force, "Overwrite an existing output directory");
  };

  auto* evolve_cmd = app.add_subcommand("evolve", "Evolve position-free genomes");
  common(evolve_cmd);
  evolve_cmd->add_option("--task", opt.task, "Task: rp, ri, hh or hl")->check(task_check);
  evolve_cmd->add_option("--generations", opt.generations, "Generation count")
      ->check(CLI::NonNegativeNumber);

  auto* fixed_cmd = app.add_subcommand(
      "evolve-fixed", "Evolve rule tables on a fixed site layout");
  common(fixed_cmd);
  fixed_cmd->add_option("--task", opt.task, "Task: rp, ri, hh or hl")->check(task_check);
  fixed_cmd->add_option("--layout", opt.layout, "Layout: full (256) or checker (128)")
      ->check(CLI::IsMember({"full", "checker"}));
  fixed_cmd->add_option("--generations", opt.generations, "Generation count")
      ->check(CLI::NonNegativeNumber);

  auto* rollout_cmd = app.add_subcommand(
      "rollout", "Run a genome and record the target-area density");
  common(rollout_cmd);
  rollout_cmd->add_option("--genome", opt.genome_path, "Genome file (empty genome if omitted)");
  auto* density_opt = rollout_cmd->add_option(
      "--density", opt.density, "Start from a random grid of this density")->check(unit);
  auto* grid_opt = rollout_cmd->add_option("--init-grid", opt.init_grid,
                                           "Start from a grid dump file");
  auto* condition_opt = rollout_cmd->add_option(
      "--condition", opt.condition,
      "Start from the evaluation pattern of this condition (default high)")
      ->check(CLI::IsMember({"low", "high"}));
  density_opt->excludes(grid_opt)->excludes(condition_opt);
  grid_opt->excludes(condition_opt);
  rollout_cmd->add_option("--steps", opt.steps, "Step count (default eval_steps)")
      ->check(CLI::PositiveNumber);
  rollout_cmd->add_option("--dump-steps,--dump", opt.dump_steps,
                          "Comma-separated steps to dump as grid files")
      ->delimiter(',');

  auto* bias_cmd = app.add_subcommand("bias", "Output/input bias of every rule");
  common(bias_cmd);
  bias_cmd->add_option("--genome", opt.genome_path, "Genome file")->required();

  auto* knockout_cmd = app.add_subcommand(
      "knockout", "Density change when each rule is removed");
  common(knockout_cmd);
  knockout_cmd->add_option("--genome", opt.genome_path, "Genome file")->required();

  auto* randomize_cmd = app.add_subcommand(
      "randomize", "Redraw rule positions, keeping rule tables");
  common(randomize_cmd);
  randomize_cmd->add_option("--genome", opt.genome_path, "Genome file")->required();
  randomize_cmd->add_flag("--sweep", opt.randomized_sweep,
                          "Also run a sweep re-randomizing positions per sample");
  randomize_cmd->add_option("--samples", opt.samples, "Samples per density")
      ->check(CLI::PositiveNumber);
  randomize_cmd->add_option("--densities", opt.densities, "Initial densities")
      ->delimiter(',')->check(unit);
  randomize_cmd->add_option("--bins", opt.bins, "Histogram bins")->check(CLI::PositiveNumber);

  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Mean density over many random starts per initial density");
  common(sweep_cmd);
  sweep_cmd->add_option("--genome", opt.genome_path, "Genome file (pure Life if omitted)");
  sweep_cmd->add_option("--samples", opt.samples, "Samples per density")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--steps", opt.steps, "Steps per sample")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--densities", opt.densities, "Initial densities")
      ->delimiter(',')->check(unit);
  sweep_cmd->add_option("--bins", opt.bins, "Histogram bins")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (evolve_cmd->parsed()) {
      cmd_evolve(opt, out, false);
    } else if (fixed_cmd->parsed()) {
      cmd_evolve(opt, out, true);
    } else if (rollout_cmd->parsed()) {
      cmd_rollout(opt, out);
    } else if (bias_cmd->parsed()) {
      cmd_bias(opt, out);
    } else if (knockout_cmd->parsed()) {
      cmd_knockout(opt, out);
    } else if (randomize_cmd->parsed()) {
      cmd_randomize(opt, out);
    } else if (sweep_cmd->parsed()) {
      cmd_sweep(opt, out);
    }
  } catch (const std::exception& e) {
    err << "homeolife: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace homeolife::cli
