#include "homeolife/grid.hpp"

#include <bit>

#include "homeolife/random.hpp"

namespace homeolife {

namespace {

// Adds one bit-plane into a 3-bit per-column counter (mod 8).
inline void accumulate(Grid::Row x, Grid::Row& c0, Grid::Row& c1,
                       Grid::Row& c2) {
  const Grid::Row carry0 = c0 & x;
  c0 ^= x;
  const Grid::Row carry1 = c1 & carry0;
  c1 ^= carry0;
  c2 ^= carry1;
}

}  // namespace

void Grid::set(int x, int y, bool alive) {
  if (x <= 0 || y <= 0 || x >= kGridSize - 1 || y >= kGridSize - 1) return;
  const Row bit = Row{1} << x;
  if (alive) {
    rows_[y] |= bit;
  } else {
    rows_[y] &= ~bit;
  }
}

int Grid::neighbor_count(int x, int y) const {
  int count = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    const int yy = y + dy;
    if (yy < 0 || yy >= kGridSize) continue;
    Row window = x > 0 ? rows_[yy] >> (x - 1) : rows_[yy] << 1;
    window &= 0b111;
    if (dy == 0) window &= 0b101;
    count += std::popcount(window);
  }
  return count;
}

int Grid::population() const {
  int count = 0;
  for (Row r : rows_) count += std::popcount(r);
  return count;
}

int Grid::population(const Region& region) const {
  const Row mask = column_mask(region.origin_x, region.width);
  int count = 0;
  for (int y = region.origin_y; y < region.origin_y + region.height; ++y) {
    count += std::popcount(rows_[y] & mask);
  }
  return count;
}

Grid life_step(const Grid& grid) {
  Grid next;
  const auto& in = grid.rows_;
  for (int y = 1; y < kGridSize - 1; ++y) {
    const Grid::Row above = in[y - 1];
    const Grid::Row self = in[y];
    const Grid::Row below = in[y + 1];
    Grid::Row c0 = 0, c1 = 0, c2 = 0;
    accumulate(above << 1, c0, c1, c2);
    accumulate(above, c0, c1, c2);
    accumulate(above >> 1, c0, c1, c2);
    accumulate(self << 1, c0, c1, c2);
    accumulate(self >> 1, c0, c1, c2);
    accumulate(below << 1, c0, c1, c2);
    accumulate(below, c0, c1, c2);
    accumulate(below >> 1, c0, c1, c2);
    // count 8 wraps to 0, which is neither 2 nor 3.
    next.rows_[y] = ~c2 & c1 & (c0 | self) & Grid::kInteriorMask;
  }
  return next;
}

double density(const Grid& grid, const Region& region) {
  return static_cast<double>(grid.population(region)) / region.area();
}

Grid random_grid(double d, RandomStream& rng) {
  Grid grid;
  for (int y = 1; y < kGridSize - 1; ++y) {
    for (int x = 1; x < kGridSize - 1; ++x) {
      grid.set(x, y, rng.bernoulli(d));
    }
  }
  return grid;
}

}  // namespace homeolife
