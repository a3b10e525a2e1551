#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "homeolife/analysis.hpp"
#include "homeolife/evolution.hpp"
#include "homeolife/grid.hpp"
#include "homeolife/rules.hpp"

namespace homeolife {

// ---- Grid dump: 40 lines of 40 characters, '.' dead and '#' alive. ----

std::string dump_grid(const Grid& grid);
// Throws MalformedInput on wrong shape or characters.
Grid parse_grid_dump(std::string_view text);

// ---- Genome files ----
//
// '#' lines carry comments; a "# key: value" comment is read back as
// metadata. Every other non-blank line is one 26-bit rule, in genome order.

using Metadata = std::vector<std::pair<std::string, std::string>>;

struct GenomeFile {
  Genome genome;
  Metadata metadata;

  // Value for `key`, or empty when absent.
  std::string find(std::string_view key) const;
};

std::string format_genome(const Genome& genome, const Metadata& metadata = {});
// Throws MalformedInput naming the offending line.
GenomeFile parse_genome(std::string_view text);

GenomeFile load_genome(const std::filesystem::path& path);

// ---- CSV tables ----

std::string evolution_log_csv(const EvolutionLog& log);
std::string trajectory_csv(const Trajectory& trajectory);
std::string bias_csv(const BiasMap& map);
std::string bias_histogram_csv(const BiasMap& map);
std::string knockout_csv(std::span<const KnockoutRecord> records);
std::string sweep_csv(std::span<const SweepRecord> records);
std::string attractor_histogram_csv(std::span<const AttractorRow> rows);

// ---- Files and manifest ----

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

std::string sha256_hex(std::string_view data);

struct ManifestEntry {
  std::string file;
  std::string sha256;
};

struct RunManifest {
  std::string tool_version;
  std::string subcommand;
  std::uint64_t seed = 0;
  std::string config;  // emitted configuration text
  std::vector<ManifestEntry> artifacts;

  std::string to_json() const;
  static RunManifest from_json(std::string_view text);
};

std::string_view tool_version();

// Collects artifacts written into one directory and records their digests.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path directory);

  void write(const std::string& name, std::string_view content);
  const std::vector<ManifestEntry>& entries() const { return entries_; }
  const std::filesystem::path& directory() const { return directory_; }

 private:
  std::filesystem::path directory_;
  std::vector<ManifestEntry> entries_;
};

}  // namespace homeolife
