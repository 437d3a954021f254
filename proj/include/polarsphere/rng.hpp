#pragma once

#include <cstdint>
#include <random>

namespace polarsphere {

/// Per-trial random stream. Every draw is determined by (seed, stream, substream),
/// so a trial produces the same numbers no matter which thread runs it.
class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return uniform_(engine_); }
  double normal() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Stream-space tags keep independent experiments in one run from sharing draws.
namespace streams {
inline constexpr std::uint64_t kCompression = 1;
inline constexpr std::uint64_t kOrderDirect = 2;
inline constexpr std::uint64_t kOrderChain = 3;
inline constexpr std::uint64_t kTauSampler = 4;
inline constexpr std::uint64_t kMeasure = 5;
inline constexpr std::uint64_t kAxes = 6;
inline constexpr std::uint64_t kIdentity = 7;
}  // namespace streams

}  // namespace polarsphere
