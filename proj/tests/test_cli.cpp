#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "helpers.hpp"
#include "homeolife/config.hpp"
#include "homeolife/io.hpp"

using namespace homeolife;
namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run_subcommand(args, out, err);
  return {status, out.str(), err.str()};
}

// Fresh scratch directory per test case.
struct Scratch {
  fs::path root;
  explicit Scratch(const std::string& name)
      : root(fs::temp_directory_path() / ("homeolife_cli_" + name)) {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Scratch() { fs::remove_all(root); }
  std::string path(const std::string& leaf) const { return (root / leaf).string(); }
};

int count_lines(const std::string& text) {
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help exits successfully and documents the flags") {
  const Result r = run({"--help"});
  CHECK(r.status == 0);
  CHECK(r.out.find("evolve-fixed") != std::string::npos);
  const Result sub = run({"rollout", "--help"});
  CHECK(sub.status == 0);
  CHECK(sub.out.find("--dump-steps") != std::string::npos);
}

TEST_CASE("unknown subcommands and bad flags fail") {
  CHECK(run({}).status != 0);
  CHECK(run({"frobnicate"}).status != 0);
  CHECK(run({"evolve", "--task", "zz"}).status != 0);
}

TEST_CASE("bias on a 45-Life-rule genome") {
  Scratch s("bias");
  Genome genome;
  for (int i = 0; i < 45; ++i) {
    genome.rules.push_back(testing::site_rule(TotalisticRule::life(), i % 16, i / 16));
  }
  write_text_file(s.path("g.txt"), format_genome(genome));
  const Result r = run({"bias", "--genome", s.path("g.txt")});
  REQUIRE(r.status == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "index,x,y,output_bias,input_bias");
  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(line.ends_with(",0.1875,0.3333333333333333"));
    ++rows;
  }
  CHECK(rows == 45);
}

TEST_CASE("rollout of the empty genome from d = 0 is all zeros") {
  Scratch s("rollout");
  write_text_file(s.path("empty.txt"), "# empty genome\n");
  const Result r =
      run({"rollout", "--genome", s.path("empty.txt"), "--density", "0", "--steps", "500"});
  REQUIRE(r.status == 0);
  CHECK(count_lines(r.out) == 502);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  int t = 0;
  while (std::getline(lines, line)) {
    CHECK(line == std::to_string(t) + ",0");
    ++t;
  }
  CHECK(t == 501);
}

TEST_CASE("rollout dumps grids into the output directory") {
  Scratch s("dump");
  const std::string out = s.path("run");
  const Result r = run({"rollout", "--density", "0.5", "--steps", "20", "--seed", "3", "--out",
                        out, "--dump-steps", "0,5,20"});
  REQUIRE(r.status == 0);
  for (const char* name : {"grid_0000.txt", "grid_0005.txt", "grid_0020.txt"}) {
    const std::string text = read_text_file(fs::path(out) / name);
    CHECK(count_lines(text) == 40);
    CHECK_NOTHROW(parse_grid_dump(text));
  }
  CHECK(fs::exists(fs::path(out) / "trajectory.csv"));
  CHECK(fs::exists(fs::path(out) / "manifest.json"));
}

TEST_CASE("invalid flag combinations are rejected") {
  Scratch s("combos");
  CHECK(run({"rollout", "--dump-steps", "1"}).status != 0);
  CHECK(run({"rollout", "--density", "0.2", "--condition", "low"}).status != 0);
  CHECK(run({"rollout", "--steps", "10", "--dump-steps", "11", "--out", s.path("x")}).status != 0);
  const Result missing = run({"bias", "--genome", s.path("nope.txt")});
  CHECK(missing.status != 0);
  CHECK(missing.err.find("not found") != std::string::npos);
  CHECK(run({"knockout"}).status != 0);
}

TEST_CASE("evolve is reproducible and never clobbers an existing directory") {
  Scratch s("evolve");
  const std::string a = s.path("a");
  const std::string b = s.path("b");
  const std::vector<std::string> base{"evolve", "--task", "hl", "--seed", "7", "--generations", "4"};
  auto with_out = [&](const std::string& dir) {
    auto args = base;
    args.push_back("--out");
    args.push_back(dir);
    return args;
  };
  REQUIRE(run(with_out(a)).status == 0);
  REQUIRE(run(with_out(b)).status == 0);
  for (const char* name : {"log.csv", "best_genome.txt", "config.txt", "manifest.json"}) {
    CHECK(read_text_file(fs::path(a) / name) == read_text_file(fs::path(b) / name));
  }
  CHECK(count_lines(read_text_file(fs::path(a) / "log.csv")) == 6);

  const Result again = run(with_out(a));
  CHECK(again.status != 0);
  CHECK(again.err.find("--force") != std::string::npos);
  auto forced = with_out(a);
  forced.push_back("--force");
  CHECK(run(forced).status == 0);

  // Manifest digests match the files on disk.
  const RunManifest m = RunManifest::from_json(read_text_file(fs::path(a) / "manifest.json"));
  CHECK(m.seed == 7);
  CHECK(m.subcommand == "evolve");
  REQUIRE(m.artifacts.size() == 3);
  for (const auto& entry : m.artifacts) {
    CHECK(sha256_hex(read_text_file(fs::path(a) / entry.file)) == entry.sha256);
  }
  // The echoed config reproduces the run.
  CHECK(parse_config(m.config).ga.master_seed == 7);
  CHECK(parse_config(m.config).task == TaskKind::kHomeostasisLow);
}

TEST_CASE("analyses read a genome written by evolve") {
  Scratch s("pipeline");
  const std::string run_dir = s.path("run");
  write_text_file(s.path("cfg.txt"),
                  "generations = 2\nanalyze_bias = true\nanalyze_knockout = true\n"
                  "analyze_sweep = true\nsweep_samples = 2\nsweep_steps = 30\n"
                  "sweep_densities = 0, 0.5\nhistogram_bins = 10\n");
  REQUIRE(run({"evolve", "--config", s.path("cfg.txt"), "--task", "hh", "--seed", "5", "--out",
               run_dir})
              .status == 0);
  for (const char* name : {"bias.csv", "bias_histogram.csv", "knockout.csv", "sweep.csv",
                           "histogram.csv", "baseline_sweep.csv", "baseline_histogram.csv"}) {
    CHECK(fs::exists(fs::path(run_dir) / name));
  }
  const std::string genome = (fs::path(run_dir) / "best_genome.txt").string();
  const GenomeFile file = load_genome(genome);
  CHECK(file.find("task") == "hh");
  CHECK(file.find("seed") == "5");

  // Bias is regenerated bit-identically from the stored genome.
  const Result bias = run({"bias", "--genome", genome});
  REQUIRE(bias.status == 0);
  CHECK(bias.out == read_text_file(fs::path(run_dir) / "bias.csv"));

  // Knockout picks up the seed from the genome metadata.
  const Result ko = run({"knockout", "--genome", genome});
  REQUIRE(ko.status == 0);
  CHECK(ko.out == read_text_file(fs::path(run_dir) / "knockout.csv"));

  const Result rnd = run({"randomize", "--genome", genome, "--seed", "9", "--out",
                          s.path("rnd"), "--sweep", "--samples", "2", "--densities", "0.5"});
  REQUIRE(rnd.status == 0);
  const GenomeFile shuffled = load_genome(s.path("rnd") + "/randomized_genome.txt");
  CHECK(shuffled.genome.size() == file.genome.size());
  CHECK(fs::exists(fs::path(s.path("rnd")) / "randomized_sweep.csv"));

  const Result sweep = run({"sweep", "--genome", genome, "--samples", "3", "--steps", "20",
                            "--densities", "0,1"});
  REQUIRE(sweep.status == 0);
  CHECK(count_lines(sweep.out) == 1 + 2 * 3);

  const Result rollout = run({"rollout", "--genome", genome, "--condition", "low", "--steps", "10"});
  REQUIRE(rollout.status == 0);
  CHECK(count_lines(rollout.out) == 12);
}

TEST_CASE("evolve-fixed writes a fixed-length genome") {
  Scratch s("fixed");
  write_text_file(s.path("cfg.txt"), "generations = 1\neval_steps = 40\nfitness_window_begin = 20\n"
                                     "fitness_window_end = 40\n");
  REQUIRE(run({"evolve-fixed", "--config", s.path("cfg.txt"), "--layout", "checker", "--task", "hl",
               "--out", s.path("run")})
              .status == 0);
  const GenomeFile file = load_genome(s.path("run") + "/best_genome.txt");
  CHECK(file.genome.size() == 128);
  CHECK(file.find("layout") == "checker");
}

TEST_CASE("config errors surface with their line") {
  Scratch s("badcfg");
  write_text_file(s.path("cfg.txt"), "generations = 1\nbit_mutation_rate = 1.5\n");
  const Result r = run({"evolve", "--config", s.path("cfg.txt")});
  CHECK(r.status != 0);
  CHECK(r.err.find("line 2") != std::string::npos);
}

}  // TEST_SUITE
