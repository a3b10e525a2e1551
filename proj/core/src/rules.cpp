#include "homeolife/rules.hpp"

#include <algorithm>
#include <array>

namespace homeolife {

std::uint32_t pack_rule(const SiteRule& rule) {
  std::uint32_t bits = rule.rule.table();
  for (int i = 0; i < kCoordinateBits; ++i) {
    const int shift = kCoordinateBits - 1 - i;
    bits |= static_cast<std::uint32_t>((rule.local_x >> shift) & 1U)
            << (kRuleConditionBits + i);
    bits |= static_cast<std::uint32_t>((rule.local_y >> shift) & 1U)
            << (kRuleConditionBits + kCoordinateBits + i);
  }
  return bits;
}

SiteRule unpack_rule(std::uint32_t bits) {
  SiteRule rule;
  rule.rule = TotalisticRule(bits & TotalisticRule::kMask);
  for (int i = 0; i < kCoordinateBits; ++i) {
    const int shift = kCoordinateBits - 1 - i;
    rule.local_x |= ((bits >> (kRuleConditionBits + i)) & 1U) << shift;
    rule.local_y |= ((bits >> (kRuleConditionBits + kCoordinateBits + i)) & 1U)
                    << shift;
  }
  return rule;
}

std::string encode_rule(const SiteRule& rule) {
  const std::uint32_t bits = pack_rule(rule);
  std::string text(kSiteRuleBits, '0');
  for (int i = 0; i < kSiteRuleBits; ++i) {
    if ((bits >> i) & 1U) text[i] = '1';
  }
  return text;
}

SiteRule decode_rule(std::string_view text) {
  if (text.size() != kSiteRuleBits) {
    throw MalformedInput("rule string must have 26 bits, got " +
                         std::to_string(text.size()));
  }
  std::uint32_t bits = 0;
  for (int i = 0; i < kSiteRuleBits; ++i) {
    if (text[i] == '1') {
      bits |= 1U << i;
    } else if (text[i] != '0') {
      throw MalformedInput("rule string contains non-binary character '" +
                           std::string(1, text[i]) + "'");
    }
  }
  return unpack_rule(bits);
}

CompiledGenome::CompiledGenome(const Genome& genome) {
  constexpr int kSites = kGenomeArea.width * kGenomeArea.height;
  std::array<int, kSites> last{};
  last.fill(-1);
  for (std::size_t i = 0; i < genome.rules.size(); ++i) {
    const auto& r = genome.rules[i];
    last[r.local_y * kGenomeArea.width + r.local_x] = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < genome.rules.size(); ++i) {
    const auto& r = genome.rules[i];
    if (last[r.local_y * kGenomeArea.width + r.local_x] !=
        static_cast<int>(i)) {
      continue;
    }
    overrides_.push_back({static_cast<std::uint8_t>(r.x()),
                          static_cast<std::uint8_t>(r.y()), r.rule});
  }
}

Grid coupled_step(const Grid& grid, const CompiledGenome& genome) {
  const Grid after_life = life_step(grid);
  Grid next = after_life;
  for (const auto& o : genome.overrides()) {
    const bool own = after_life.get(o.x, o.y);
    next.set(o.x, o.y,
             apply_rule(o.rule, own, after_life.neighbor_count(o.x, o.y)));
  }
  return next;
}

Grid coupled_step(const Grid& grid, const Genome& genome) {
  return coupled_step(grid, CompiledGenome(genome));
}

Trajectory rollout(const Grid& grid0, const Genome& genome, int steps,
                   std::span<const int> snapshot_steps) {
  const CompiledGenome compiled(genome);
  Trajectory out;
  out.densities.reserve(static_cast<std::size_t>(steps) + 1);
  auto next_snapshot = snapshot_steps.begin();
  auto record = [&](int t, const Grid& g) {
    out.densities.push_back(density(g, kTargetArea));
    while (next_snapshot != snapshot_steps.end() && *next_snapshot == t) {
      out.snapshots.push_back({t, g});
      ++next_snapshot;
    }
  };
  Grid grid = grid0;
  record(0, grid);
  for (int t = 1; t <= steps; ++t) {
    grid = coupled_step(grid, compiled);
    record(t, grid);
  }
  return out;
}

double window_mean_density(const Grid& grid0, const CompiledGenome& genome,
                           StepWindow window) {
  Grid grid = grid0;
  long long live = 0;
  for (int t = 0; t < window.end; ++t) {
    if (t >= window.begin) live += grid.population(kTargetArea);
    if (t + 1 < window.end) grid = coupled_step(grid, genome);
  }
  return static_cast<double>(live) /
         (static_cast<double>(kTargetArea.area()) * window.length());
}

}  // namespace homeolife
