#include "homeolife/config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <set>

#include <fmt/format.h>

namespace homeolife {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text, int line, std::string_view key) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError(line, fmt::format("invalid value '{}' for key '{}'",
                                        text, key));
  }
  return value;
}

double parse_unit(std::string_view text, int line, std::string_view key) {
  const double v = parse_number<double>(text, line, key);
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ConfigError(line,
                      fmt::format("value {} for key '{}' is outside [0, 1]",
                                  text, key));
  }
  return v;
}

int parse_at_least(std::string_view text, int line, std::string_view key,
                   int minimum) {
  const int v = parse_number<int>(text, line, key);
  if (v < minimum) {
    throw ConfigError(line, fmt::format("value {} for key '{}' must be >= {}",
                                        text, key, minimum));
  }
  return v;
}

bool parse_bool(std::string_view text, int line, std::string_view key) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(line,
                    fmt::format("invalid boolean '{}' for key '{}'", text, key));
}

struct KeyHandler {
  std::string name;
  std::function<void(ExperimentConfig&, std::string_view, int)> parse;
  std::function<std::string(const ExperimentConfig&)> emit;
};

const std::vector<KeyHandler>& handlers() {
  static const std::vector<KeyHandler> table = [] {
    std::vector<KeyHandler> h;
    auto count = [&h](std::string name, int minimum, auto member) {
      h.push_back({name,
                   [name, minimum, member](ExperimentConfig& c,
                                           std::string_view v, int line) {
                     member(c) = parse_at_least(v, line, name, minimum);
                   },
                   [member](const ExperimentConfig& c) {
                     return fmt::format("{}", member(c));
                   }});
    };
    auto rate = [&h](std::string name, auto member) {
      h.push_back({name,
                   [name, member](ExperimentConfig& c, std::string_view v,
                                  int line) {
                     member(c) = parse_unit(v, line, name);
                   },
                   [member](const ExperimentConfig& c) {
                     return fmt::format("{}", member(c));
                   }});
    };
    auto flag = [&h](std::string name, auto member) {
      h.push_back({name,
                   [name, member](ExperimentConfig& c, std::string_view v,
                                  int line) {
                     member(c) = parse_bool(v, line, name);
                   },
                   [member](const ExperimentConfig& c) {
                     return std::string(member(c) ? "true" : "false");
                   }});
    };

    count("population_size", 1,
          [](auto& c) -> auto& { return c.ga.population_size; });
    count("initial_rules_per_genome", 0,
          [](auto& c) -> auto& {
            return c.ga.initial_rules_per_genome;
          });
    rate("bit_mutation_rate",
         [](auto& c) -> auto& { return c.ga.bit_mutation_rate; });
    rate("crossover_rate",
         [](auto& c) -> auto& { return c.ga.crossover_rate; });
    rate("gene_dup_del_rate",
         [](auto& c) -> auto& { return c.ga.gene_dup_del_rate; });
    count("elite_count", 0,
          [](auto& c) -> auto& { return c.ga.elite_count; });
    count("survivor_count", 1,
          [](auto& c) -> auto& { return c.ga.survivor_count; });
    rate("low_density",
         [](auto& c) -> auto& { return c.ga.low_density; });
    rate("high_density",
         [](auto& c) -> auto& { return c.ga.high_density; });
    count("eval_steps", 1,
          [](auto& c) -> auto& { return c.ga.eval_steps; });
    count("fitness_window_begin", 0,
          [](auto& c) -> auto& { return c.ga.fitness_window.begin; });
    count("fitness_window_end", 1,
          [](auto& c) -> auto& { return c.ga.fitness_window.end; });
    count("generations", 0,
          [](auto& c) -> auto& { return c.ga.generations; });

    h.push_back({"master_seed",
                 [](ExperimentConfig& c, std::string_view v, int line) {
                   c.ga.master_seed =
                       parse_number<std::uint64_t>(v, line, "master_seed");
                 },
                 [](const ExperimentConfig& c) {
                   return fmt::format("{}", c.ga.master_seed);
                 }});
    h.push_back({"task",
                 [](ExperimentConfig& c, std::string_view v, int line) {
                   auto kind = parse_task_name(v);
                   if (!kind) {
                     throw ConfigError(
                         line, fmt::format("unknown task '{}' (expected rp, "
                                           "ri, hh or hl)",
                                           v));
                   }
                   c.task = *kind;
                 },
                 [](const ExperimentConfig& c) {
                   return std::string(task_name(c.task));
                 }});
    h.push_back({"layout",
                 [](ExperimentConfig& c, std::string_view v, int line) {
                   auto layout = parse_layout_name(v);
                   if (!layout) {
                     throw ConfigError(
                         line, fmt::format("unknown layout '{}' (expected "
                                           "full or checker)",
                                           v));
                   }
                   c.layout = *layout;
                 },
                 [](const ExperimentConfig& c) {
                   return std::string(layout_name(c.layout));
                 }});
    h.push_back({"sweep_densities",
                 [](ExperimentConfig& c, std::string_view v, int line) {
                   std::vector<double> values;
                   while (!v.empty()) {
                     const auto comma = v.find(',');
                     values.push_back(parse_unit(trim(v.substr(0, comma)),
                                                 line, "sweep_densities"));
                     if (comma == std::string_view::npos) break;
                     v.remove_prefix(comma + 1);
                   }
                   c.sweep_densities = std::move(values);
                 },
                 [](const ExperimentConfig& c) {
                   return fmt::format("{}", fmt::join(c.sweep_densities, ","));
                 }});
    count("sweep_samples", 1,
          [](auto& c) -> auto& { return c.sweep_samples; });
    count("sweep_steps", 1,
          [](auto& c) -> auto& { return c.sweep_steps; });
    count("histogram_bins", 1,
          [](auto& c) -> auto& { return c.histogram_bins; });
    h.push_back({"output_dir",
                 [](ExperimentConfig& c, std::string_view v, int) {
                   c.output_dir = std::string(v);
                 },
                 [](const ExperimentConfig& c) { return c.output_dir; }});
    flag("analyze_bias",
         [](auto& c) -> auto& { return c.analyze_bias; });
    flag("analyze_knockout",
         [](auto& c) -> auto& { return c.analyze_knockout; });
    flag("analyze_sweep",
         [](auto& c) -> auto& { return c.analyze_sweep; });
    return h;
  }();
  return table;
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}", line, message)
                                  : message),
      line_(line) {}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& h : handlers()) k.push_back(h.name);
    return k;
  }();
  return keys;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text.remove_prefix(newline == std::string_view::npos ? text.size()
                                                         : newline + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no,
                        fmt::format("expected 'key = value', got '{}'", line));
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key before '='");

    const auto& table = handlers();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const KeyHandler& h) { return h.name == key; });
    if (it == table.end()) {
      throw ConfigError(line_no, fmt::format("unknown key '{}'", key));
    }
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError(line_no, fmt::format("duplicate key '{}'", key));
    }
    it->parse(config, value, line_no);
  }

  try {
    config.ga.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
  return config;
}

std::string emit_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto& h : handlers()) {
    out += fmt::format("{} = {}\n", h.name, h.emit(config));
  }
  return out;
}

}  // namespace homeolife
