#include "homeolife/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

namespace homeolife {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename Fn>
void for_each_line(std::string_view text, Fn fn) {
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto newline = text.find('\n');
    fn(line_no, text.substr(0, newline));
    if (newline == std::string_view::npos) break;
    text.remove_prefix(newline + 1);
  }
}

}  // namespace

std::string dump_grid(const Grid& grid) {
  std::string out;
  out.reserve(kGridSize * (kGridSize + 1));
  for (int y = 0; y < kGridSize; ++y) {
    for (int x = 0; x < kGridSize; ++x) out += grid.get(x, y) ? '#' : '.';
    out += '\n';
  }
  return out;
}

Grid parse_grid_dump(std::string_view text) {
  Grid grid;
  int rows = 0;
  for_each_line(text, [&](int line_no, std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() && rows == kGridSize) return;
    if (rows == kGridSize || line.size() != kGridSize) {
      throw MalformedInput(
          fmt::format("grid dump line {}: expected {} rows of {} cells",
                      line_no, kGridSize, kGridSize));
    }
    for (int x = 0; x < kGridSize; ++x) {
      if (line[x] == '#') {
        grid.set(x, rows, true);
      } else if (line[x] != '.') {
        throw MalformedInput(fmt::format(
            "grid dump line {}: unexpected character '{}'", line_no, line[x]));
      }
    }
    ++rows;
  });
  if (rows != kGridSize) {
    throw MalformedInput(
        fmt::format("grid dump has {} rows, expected {}", rows, kGridSize));
  }
  return grid;
}

std::string GenomeFile::find(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return {};
}

std::string format_genome(const Genome& genome, const Metadata& metadata) {
  std::string out;
  for (const auto& [key, value] : metadata) {
    out += fmt::format("# {}: {}\n", key, value);
  }
  for (const auto& rule : genome.rules) {
    out += encode_rule(rule);
    out += '\n';
  }
  return out;
}

GenomeFile parse_genome(std::string_view text) {
  GenomeFile file;
  for_each_line(text, [&](int line_no, std::string_view raw) {
    const std::string_view line = trim(raw);
    if (line.empty()) return;
    if (line.front() == '#') {
      const std::string_view body = trim(line.substr(1));
      const auto colon = body.find(':');
      if (colon != std::string_view::npos) {
        file.metadata.emplace_back(std::string(trim(body.substr(0, colon))),
                                   std::string(trim(body.substr(colon + 1))));
      }
      return;
    }
    try {
      file.genome.rules.push_back(decode_rule(line));
    } catch (const MalformedInput& e) {
      throw MalformedInput(fmt::format("genome line {}: {}", line_no, e.what()));
    }
  });
  return file;
}

GenomeFile load_genome(const std::filesystem::path& path) {
  return parse_genome(read_text_file(path));
}

std::string evolution_log_csv(const EvolutionLog& log) {
  std::string out = "generation,best_fitness,mean_fitness,best_rule_count\n";
  for (const auto& r : log.records) {
    out += fmt::format("{},{},{},{}\n", r.generation, r.best_fitness,
                       r.mean_fitness, r.best_rule_count);
  }
  return out;
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = "step,density\n";
  for (std::size_t t = 0; t < trajectory.densities.size(); ++t) {
    out += fmt::format("{},{}\n", t, trajectory.densities[t]);
  }
  return out;
}

std::string bias_csv(const BiasMap& map) {
  std::string out = "index,x,y,output_bias,input_bias\n";
  for (std::size_t i = 0; i < map.rules.size(); ++i) {
    const auto& r = map.rules[i];
    out += fmt::format("{},{},{},{},{}\n", i, r.x, r.y, r.output_bias,
                       r.input_bias ? fmt::format("{}", *r.input_bias) : "");
  }
  return out;
}

std::string bias_histogram_csv(const BiasMap& map) {
  std::string out = "kind,bin_lo,bin_hi,count\n";
  auto emit = [&](std::string_view kind, const auto& histogram) {
    for (int b = 0; b < kBiasHistogramBins; ++b) {
      out += fmt::format("{},{},{},{}\n", kind,
                         static_cast<double>(b) / kBiasHistogramBins,
                         static_cast<double>(b + 1) / kBiasHistogramBins,
                         histogram[b]);
    }
  };
  emit("output", map.output_histogram);
  emit("input", map.input_histogram);
  return out;
}

std::string knockout_csv(std::span<const KnockoutRecord> records) {
  std::string out = "index,x,y,delta_low,delta_high\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{}\n", r.rule_index, r.x, r.y, r.delta_low,
                       r.delta_high);
  }
  return out;
}

std::string sweep_csv(std::span<const SweepRecord> records) {
  std::string out = "density,sample,mean_density\n";
  for (const auto& r : records) {
    for (std::size_t j = 0; j < r.sample_means.size(); ++j) {
      out += fmt::format("{},{},{}\n", r.initial_density, j, r.sample_means[j]);
    }
  }
  return out;
}

std::string attractor_histogram_csv(std::span<const AttractorRow> rows) {
  std::string out = "density,bin_lo,bin_hi,count\n";
  for (const auto& row : rows) {
    const auto bins = static_cast<double>(row.counts.size());
    for (std::size_t b = 0; b < row.counts.size(); ++b) {
      out += fmt::format("{},{},{},{}\n", row.initial_density,
                         static_cast<double>(b) / bins,
                         static_cast<double>(b + 1) / bins, row.counts[b]);
    }
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex += fmt::format("{:02x}", digest[i]);
  }
  return hex;
}

std::string_view tool_version() {
#ifdef HOMEOLIFE_VERSION
  return HOMEOLIFE_VERSION;
#else
  return "unknown";
#endif
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = "homeolife";
  j["tool_version"] = tool_version;
  j["subcommand"] = subcommand;
  j["seed"] = seed;
  j["config"] = config;
  auto& files = j["artifacts"] = nlohmann::ordered_json::array();
  for (const auto& a : artifacts) {
    files.push_back({{"file", a.file}, {"sha256", a.sha256}});
  }
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  RunManifest m;
  m.tool_version = j.at("tool_version").get<std::string>();
  m.subcommand = j.at("subcommand").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.config = j.at("config").get<std::string>();
  for (const auto& a : j.at("artifacts")) {
    m.artifacts.push_back(
        {a.at("file").get<std::string>(), a.at("sha256").get<std::string>()});
  }
  return m;
}

ArtifactWriter::ArtifactWriter(std::filesystem::path directory)
    : directory_(std::move(directory)) {}

void ArtifactWriter::write(const std::string& name, std::string_view content) {
  write_text_file(directory_ / name, content);
  entries_.push_back({name, sha256_hex(content)});
}

}  // namespace homeolife
