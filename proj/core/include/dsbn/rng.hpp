#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace dsbn {

/// Seeded generator "dsbn-rng/1": std::mt19937_64 with fixed, portable mappings
/// to doubles and bounded integers. Standard-library distributions are avoided
/// because their output is implementation-defined.
class Rng {
 public:
  static constexpr const char* kName = "dsbn-rng/1 (mt19937_64)";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in (0, 1].
  double uniform_open_zero() { return 1.0 - uniform(); }
  /// Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  bool coin() { return (engine_() >> 63) != 0; }

  /// Derives an independent child seed for a named sub-stream.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
};

/// Index drawn from a running-sum table of non-negative weights.
std::size_t sample_index(Rng& rng, std::span<const double> cumulative);

}  // namespace dsbn
