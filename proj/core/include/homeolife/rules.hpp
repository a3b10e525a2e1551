#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "homeolife/grid.hpp"

namespace homeolife {

class MalformedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kRuleConditionBits = 18;
inline constexpr int kCoordinateBits = 4;
inline constexpr int kSiteRuleBits = kRuleConditionBits + 2 * kCoordinateBits;

// Output for every (own state, live-neighbour count) pair. Bit n of the
// table is birth[n]; bit 9 + n is survive[n].
class TotalisticRule {
 public:
  constexpr TotalisticRule() = default;
  constexpr explicit TotalisticRule(std::uint32_t table)
      : table_(table & kMask) {}

  static constexpr TotalisticRule from_sets(std::initializer_list<int> birth,
                                            std::initializer_list<int> survive) {
    std::uint32_t table = 0;
    for (int n : birth) table |= 1U << n;
    for (int n : survive) table |= 1U << (9 + n);
    return TotalisticRule(table);
  }
  static constexpr TotalisticRule life() { return from_sets({3}, {2, 3}); }
  static constexpr TotalisticRule constant(bool output) {
    return TotalisticRule(output ? kMask : 0);
  }

  constexpr bool birth(int n) const { return (table_ >> n) & 1U; }
  constexpr bool survive(int n) const { return (table_ >> (9 + n)) & 1U; }
  constexpr bool output(bool own, int n) const {
    return (table_ >> ((own ? 9 : 0) + n)) & 1U;
  }
  constexpr std::uint32_t table() const { return table_; }

  friend constexpr bool operator==(TotalisticRule, TotalisticRule) = default;

  static constexpr std::uint32_t kMask = (1U << kRuleConditionBits) - 1;

 private:
  std::uint32_t table_ = 0;
};

// Output of `rule` for a cell in state `own` with `n` live neighbours.
constexpr bool apply_rule(TotalisticRule rule, bool own, int n) {
  return rule.output(own, n);
}

struct SiteRule {
  TotalisticRule rule;
  std::uint8_t local_x = 0;  // 0..15 inside the genome area
  std::uint8_t local_y = 0;

  constexpr int x() const { return kGenomeArea.origin_x + local_x; }
  constexpr int y() const { return kGenomeArea.origin_y + local_y; }

  friend constexpr bool operator==(const SiteRule&, const SiteRule&) = default;
};

// Packs a SiteRule so that bit i corresponds to character i of the 26-bit
// text form: [0,9) birth, [9,18) survive, [18,22) x MSB-first, [22,26) y.
std::uint32_t pack_rule(const SiteRule& rule);
SiteRule unpack_rule(std::uint32_t bits);

std::string encode_rule(const SiteRule& rule);
// Throws MalformedInput unless `bits` is exactly 26 characters of '0'/'1'.
SiteRule decode_rule(std::string_view bits);

struct Genome {
  std::vector<SiteRule> rules;

  std::size_t size() const { return rules.size(); }
  bool empty() const { return rules.empty(); }
  friend bool operator==(const Genome&, const Genome&) = default;
};

// Genome reduced to what the dynamics observe: one entry per site, holding
// the last rule written there. Overrides all read the post-Life state, so
// earlier rules at the same site never affect the result.
class CompiledGenome {
 public:
  CompiledGenome() = default;
  explicit CompiledGenome(const Genome& genome);

  struct Override {
    std::uint8_t x;
    std::uint8_t y;
    TotalisticRule rule;
  };
  std::span<const Override> overrides() const { return overrides_; }

 private:
  std::vector<Override> overrides_;
};

// Life generation followed by the genome's site overrides.
Grid coupled_step(const Grid& grid, const Genome& genome);
Grid coupled_step(const Grid& grid, const CompiledGenome& genome);

struct Snapshot {
  int step;
  Grid grid;
};

struct Trajectory {
  // densities[t] is the target-area density after t steps (t = 0 initial).
  std::vector<double> densities;
  std::vector<Snapshot> snapshots;
};

// Runs `steps` coupled steps from `grid0`; snapshots are taken at the listed
// step indices (0 means the initial grid) in ascending order.
Trajectory rollout(const Grid& grid0, const Genome& genome, int steps,
                   std::span<const int> snapshot_steps = {});

// Half-open window [begin, end) over trajectory indices.
struct StepWindow {
  int begin = 250;
  int end = 500;
  int length() const { return end - begin; }
  friend bool operator==(const StepWindow&, const StepWindow&) = default;
};

// Mean target-area density over `window` of the rollout from `grid0`,
// without materializing the trajectory.
double window_mean_density(const Grid& grid0, const CompiledGenome& genome,
                           StepWindow window);

}  // namespace homeolife
