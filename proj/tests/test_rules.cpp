#include <doctest.h>

#include "helpers.hpp"
#include "homeolife/evolution.hpp"
#include "homeolife/random.hpp"
#include "homeolife/rules.hpp"
#include "reference_life.hpp"

using namespace homeolife;
using testing::grid_with;
using testing::site_rule;

namespace {

const std::string kLifeAtOrigin = std::string("000100000") + "001100000" + "0000" + "0000";

Genome genome_of(std::initializer_list<SiteRule> rules) { return Genome{rules}; }

}  // namespace

TEST_SUITE("rules") {

TEST_CASE("decode: the Life rule at the origin") {
  const SiteRule r = decode_rule(kLifeAtOrigin);
  CHECK(r.rule == TotalisticRule::life());
  CHECK(r.local_x == 0);
  CHECK(r.local_y == 0);
  CHECK(r.x() == 12);
  CHECK(r.y() == 12);
}

TEST_CASE("decode: constant strings") {
  const SiteRule zeros = decode_rule(std::string(26, '0'));
  CHECK(zeros.rule == TotalisticRule::constant(false));
  CHECK(zeros.local_x == 0);
  CHECK(zeros.local_y == 0);

  const SiteRule ones = decode_rule(std::string(26, '1'));
  CHECK(ones.rule == TotalisticRule::constant(true));
  CHECK(ones.local_x == 15);
  CHECK(ones.local_y == 15);
}

TEST_CASE("decode: coordinates are most-significant-bit first") {
  std::string bits(26, '0');
  bits[18] = '1';  // x = 8
  bits[25] = '1';  // y = 1
  const SiteRule r = decode_rule(bits);
  CHECK(r.local_x == 8);
  CHECK(r.local_y == 1);
}

TEST_CASE("decode rejects malformed strings") {
  CHECK_THROWS_AS(decode_rule(""), MalformedInput);
  CHECK_THROWS_AS(decode_rule(std::string(25, '0')), MalformedInput);
  CHECK_THROWS_AS(decode_rule(std::string(27, '0')), MalformedInput);
  CHECK_THROWS_AS(decode_rule(std::string(25, '0') + "2"), MalformedInput);
}

TEST_CASE("encode examples") {
  CHECK(encode_rule(site_rule(TotalisticRule::life(), 0, 0)) == kLifeAtOrigin);
  const std::string corner = encode_rule(site_rule(TotalisticRule{}, 15, 15));
  CHECK(corner.substr(18) == "11111111");
  CHECK(corner.substr(0, 18) == std::string(18, '0'));
}

TEST_CASE("codec round-trips random rules and every one-hot string") {
  auto rng = derive_stream(26, "codec");
  for (int i = 0; i < 10000; ++i) {
    const auto bits = static_cast<std::uint32_t>(rng()) & kAllRuleBits;
    const SiteRule r = unpack_rule(bits);
    REQUIRE(decode_rule(encode_rule(r)) == r);
    REQUIRE(pack_rule(r) == bits);
  }
  for (int i = 0; i < kSiteRuleBits; ++i) {
    std::string s(26, '0');
    s[i] = '1';
    REQUIRE(encode_rule(decode_rule(s)) == s);
  }
}

TEST_CASE("apply_rule examples") {
  const auto life = TotalisticRule::life();
  CHECK(apply_rule(life, false, 3));
  CHECK_FALSE(apply_rule(life, true, 1));
  CHECK(apply_rule(life, true, 2));
  CHECK_FALSE(apply_rule(life, false, 2));
  for (int n = 0; n <= 8; ++n) {
    CHECK_FALSE(apply_rule(TotalisticRule::constant(false), false, n));
    CHECK_FALSE(apply_rule(TotalisticRule::constant(false), true, n));
  }
}

TEST_CASE("coupled_step with the empty genome is life_step") {
  auto rng = derive_stream(4, "coupled-empty");
  for (int i = 0; i < 20; ++i) {
    const Grid g = random_grid(0.5, rng);
    CHECK(coupled_step(g, Genome{}) == life_step(g));
  }
}

TEST_CASE("unconditional rule forces its site") {
  const Genome g = genome_of({site_rule(TotalisticRule::constant(true), 0, 0)});
  const Grid next = coupled_step(Grid{}, g);
  CHECK(next.population() == 1);
  CHECK(next.get(12, 12));
}

TEST_CASE("later rule at the same site wins") {
  const Genome g = genome_of({site_rule(TotalisticRule::constant(true), 0, 0),
                              site_rule(TotalisticRule::constant(false), 0, 0)});
  CHECK(coupled_step(Grid{}, g) == Grid{});
  const Genome reversed = genome_of({site_rule(TotalisticRule::constant(false), 0, 0),
                                     site_rule(TotalisticRule::constant(true), 0, 0)});
  CHECK(coupled_step(Grid{}, reversed).get(12, 12));
}

TEST_CASE("rules read the post-Life state, not each other's outputs") {
  // Two neighbouring birth-on-1 rules on an empty grid: if the second rule
  // saw the first one's output it would fire too.
  const auto birth_on_one = TotalisticRule::from_sets({1}, {});
  const Genome g = genome_of({site_rule(TotalisticRule::constant(true), 0, 0),
                              site_rule(birth_on_one, 1, 0)});
  const Grid next = coupled_step(Grid{}, g);
  CHECK(next.get(12, 12));
  CHECK_FALSE(next.get(13, 12));
}

TEST_CASE("coupled_step matches the reference engine for random genomes") {
  auto rng = derive_stream(12, "coupled-vs-reference");
  for (int trial = 0; trial < 100; ++trial) {
    const Genome genome = random_genome(1 + rng.uniform_below(80), rng);
    Grid g = random_grid(rng.uniform01(), rng);
    auto cells = reference::from_grid(g);
    const auto strings = testing::rule_strings(genome);
    for (int t = 0; t < 10; ++t) {
      g = coupled_step(g, genome);
      cells = reference::coupled_step(cells, strings);
      REQUIRE(reference::from_grid(g) == cells);
    }
  }
}

TEST_CASE("shadowed rules never change a rollout") {
  auto rng = derive_stream(13, "shadowing");
  for (int trial = 0; trial < 30; ++trial) {
    Genome genome = random_genome(20, rng);
    const auto& victim = genome.rules[rng.uniform_below(genome.size())];
    const bool value = rng.bernoulli(0.5);
    const SiteRule shadow =
        site_rule(TotalisticRule::constant(value), victim.local_x, victim.local_y);
    Genome with_shadow = genome;
    with_shadow.rules.push_back(shadow);
    Genome pruned;
    for (const auto& r : genome.rules) {
      if (r.local_x != shadow.local_x || r.local_y != shadow.local_y) {
        pruned.rules.push_back(r);
      }
    }
    pruned.rules.push_back(shadow);
    const Grid g0 = random_grid(0.5, rng);
    CHECK(rollout(g0, with_shadow, 60).densities == rollout(g0, pruned, 60).densities);
  }
}

TEST_CASE("cells outside the genome area evolve exactly as under Life") {
  auto rng = derive_stream(14, "outside-area");
  for (int trial = 0; trial < 100; ++trial) {
    const Genome genome = random_genome(60, rng);
    const Grid g = random_grid(rng.uniform01(), rng);
    const Grid coupled = coupled_step(g, genome);
    const Grid plain = life_step(g);
    for (int y = 0; y < kGridSize; ++y)
      for (int x = 0; x < kGridSize; ++x)
        if (!kGenomeArea.contains(x, y)) REQUIRE(coupled.get(x, y) == plain.get(x, y));
  }
}

TEST_CASE("rollout examples") {
  SUBCASE("empty grid, empty genome") {
    const Trajectory t = rollout(Grid{}, Genome{}, 500);
    REQUIRE(t.densities.size() == 501);
    for (double d : t.densities) CHECK(d == 0.0);
  }
  SUBCASE("blinker keeps its population") {
    const Trajectory t = rollout(grid_with({{19, 20}, {20, 20}, {21, 20}}), Genome{}, 50);
    for (double d : t.densities) CHECK(d == 3.0 / 1024.0);
  }
  SUBCASE("seeded d=0.5 grid matches the reference engine") {
    auto rng = derive_stream(1, "rollout-reference");
    const Grid g0 = random_grid(0.5, rng);
    const Trajectory t = rollout(g0, Genome{}, 500);
    CHECK(t.densities == reference::trajectory(reference::from_grid(g0), {}, 500));
  }
}

TEST_CASE("rollout snapshots and determinism") {
  auto rng = derive_stream(15, "snapshots");
  const Genome genome = random_genome(45, rng);
  const Grid g0 = random_grid(0.5, rng);
  const std::vector<int> steps{0, 3, 10};
  const Trajectory a = rollout(g0, genome, 10, steps);
  const Trajectory b = rollout(g0, genome, 10, steps);
  CHECK(a.densities == b.densities);
  REQUIRE(a.snapshots.size() == 3);
  CHECK(a.snapshots[0].grid == g0);
  Grid g = g0;
  for (int i = 0; i < 3; ++i) g = coupled_step(g, genome);
  CHECK(a.snapshots[1].step == 3);
  CHECK(a.snapshots[1].grid == g);
}

TEST_CASE("window mean equals the mean of the trajectory slice") {
  auto rng = derive_stream(16, "window");
  const Genome genome = random_genome(45, rng);
  const Grid g0 = random_grid(0.5, rng);
  const Trajectory t = rollout(g0, genome, 500);
  const double expected = reference::window_mean(t.densities, 250, 500);
  CHECK(window_mean_density(g0, CompiledGenome(genome), {250, 500}) ==
        doctest::Approx(expected).epsilon(1e-12));
  // 250 samples: d_250 .. d_499.
  CHECK(StepWindow{250, 500}.length() == 250);
}

}  // TEST_SUITE
