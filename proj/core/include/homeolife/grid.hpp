#pragma once

#include <array>
#include <compare>
#include <cstdint>

namespace homeolife {

class RandomStream;

inline constexpr int kGridSize = 40;

// Axis-aligned block of cells. x is the column, y is the row.
struct Region {
  int origin_x = 0;
  int origin_y = 0;
  int width = 0;
  int height = 0;

  constexpr int area() const { return width * height; }
  constexpr bool contains(int x, int y) const {
    return x >= origin_x && x < origin_x + width && y >= origin_y &&
           y < origin_y + height;
  }
  friend constexpr bool operator==(const Region&, const Region&) = default;
};

// Concentric squares: fitness is measured over the target area, rules may
// only be placed inside the genome area.
inline constexpr Region kWholeGrid{0, 0, kGridSize, kGridSize};
inline constexpr Region kTargetArea{4, 4, 32, 32};
inline constexpr Region kGenomeArea{12, 12, 16, 16};

// 40x40 binary Life state with a dead outer ring.
//
// Each row is packed into one 64-bit word (bit x = column x) so a Life
// generation is a handful of word operations per row. The boundary ring is
// zero after construction and after every mutating call.
class Grid {
 public:
  using Row = std::uint64_t;

  Grid() = default;

  bool get(int x, int y) const { return (rows_[y] >> x) & 1U; }
  // Writes to the boundary ring are ignored.
  void set(int x, int y, bool alive);

  Row row(int y) const { return rows_[y]; }
  const std::array<Row, kGridSize>& rows() const { return rows_; }

  // Live cells among the 8 neighbours; out-of-grid cells read as dead.
  int neighbor_count(int x, int y) const;

  int population() const;
  int population(const Region& region) const;

  friend bool operator==(const Grid&, const Grid&) = default;

  static constexpr Row kInteriorMask =
      ((Row{1} << (kGridSize - 1)) - 1) & ~Row{1};

 private:
  friend Grid life_step(const Grid&);
  std::array<Row, kGridSize> rows_{};
};

// One B3/S23 generation.
Grid life_step(const Grid& grid);

// Live fraction of `region`.
double density(const Grid& grid, const Region& region);

// Fills every interior cell independently with probability `d`.
Grid random_grid(double d, RandomStream& rng);

// Column mask selecting [x0, x0 + width) within a row word.
constexpr Grid::Row column_mask(int x0, int width) {
  return ((width >= 64 ? ~Grid::Row{0} : ((Grid::Row{1} << width) - 1)))
         << x0;
}

}  // namespace homeolife
