#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace homeolife {

// Counter-based random stream: output i is a keyed hash of i, so a stream is
// fully described by (key, position) and streams for different purposes never
// share state. Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform01();
  // Uniform in [0, bound); bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);
  // True with probability p (p <= 0 never, p >= 1 always).
  bool bernoulli(double p);

  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

// Independent stream for (seed, purpose, indices...). Identical inputs give
// identical streams; any change to label or indices gives an unrelated key.
RandomStream derive_stream(std::uint64_t master_seed, std::string_view label,
                           std::initializer_list<std::uint64_t> indices = {});

}  // namespace homeolife
