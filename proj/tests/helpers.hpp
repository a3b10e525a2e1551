#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "homeolife/grid.hpp"
#include "homeolife/rules.hpp"

namespace testing {

inline homeolife::Grid grid_with(std::initializer_list<std::pair<int, int>> cells) {
  homeolife::Grid g;
  for (auto [x, y] : cells) g.set(x, y, true);
  return g;
}

inline std::vector<std::string> rule_strings(const homeolife::Genome& genome) {
  std::vector<std::string> out;
  for (const auto& r : genome.rules) out.push_back(homeolife::encode_rule(r));
  return out;
}

inline homeolife::SiteRule site_rule(homeolife::TotalisticRule rule, int lx, int ly) {
  return {rule, static_cast<std::uint8_t>(lx), static_cast<std::uint8_t>(ly)};
}

// |observed - expected| within k standard deviations.
inline bool within_sigma(double observed, double expected, double sigma, double k = 4.0) {
  return std::abs(observed - expected) <= k * sigma;
}

// Pearson chi-square statistic against a uniform expectation.
inline double chi_square_uniform(const std::vector<long long>& counts) {
  long long total = 0;
  for (auto c : counts) total += c;
  const double expected = static_cast<double>(total) / counts.size();
  double chi = 0.0;
  for (auto c : counts) chi += (c - expected) * (c - expected) / expected;
  return chi;
}

// Chi-square with df degrees of freedom has mean df and variance 2 df.
inline bool chi_square_ok(double chi, std::size_t df, double k = 4.0) {
  return chi <= df + k * std::sqrt(2.0 * df);
}

}  // namespace testing
