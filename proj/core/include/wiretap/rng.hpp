#pragma once

#include <array>
#include <cstdint>

namespace wiretap {

// Named sub-streams so Alice/Bob/Eve noise, fading, CSI estimation noise and
// hash draws are mutually independent for any (seed, frame) pair.
enum class Branch : std::uint64_t {
  MainNoise = 1,
  WiretapNoise = 2,
  Fading = 3,
  CsiEstimate = 4,
  Source = 5,
  HashDraw = 6,
  GraphConstruction = 7,
  ExitApriori = 8,
};

// Counter-keyed generator: the state is derived from (seed, stream, substream)
// through splitmix64, then iterated with xoshiro256++. Two StreamRng built from
// different key tuples produce statistically independent sequences, and the
// same tuple always reproduces the same sequence bit for bit.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t seed, std::uint64_t stream = 0,
                     std::uint64_t substream = 0);
  StreamRng(std::uint64_t seed, std::uint64_t frame, Branch branch)
      : StreamRng(seed, frame, static_cast<std::uint64_t>(branch)) {}

  std::uint64_t nextU64();

  // Uniform on [0,1) with 53 random bits.
  double uniform01();

  // Standard normal via Box-Muller (second draw cached).
  double gaussian();

  double exponential(double mean);

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::array<std::uint64_t, 4> state_;
  double cachedGaussian_ = 0.0;
  bool hasCachedGaussian_ = false;
};

}  // namespace wiretap
