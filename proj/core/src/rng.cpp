#include "wiretap/rng.hpp"

#include <cmath>

namespace wiretap {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t substream) {
  std::uint64_t key = seed;
  std::uint64_t a = splitmix64(key);
  key ^= 0xa0761d6478bd642fULL + stream;
  std::uint64_t b = splitmix64(key);
  key ^= 0xe7037ed1a0b428dbULL + substream;
  std::uint64_t c = splitmix64(key);
  std::uint64_t d = splitmix64(key);
  state_ = {a, b, c, d};
  // xoshiro must not start from the all-zero state
  if ((a | b | c | d) == 0) state_ = {1, 2, 3, 4};
}

std::uint64_t StreamRng::nextU64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double StreamRng::uniform01() {
  return static_cast<double>(nextU64() >> 11) * 0x1.0p-53;
}

double StreamRng::gaussian() {
  if (hasCachedGaussian_) {
    hasCachedGaussian_ = false;
    return cachedGaussian_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  cachedGaussian_ = r * std::sin(theta);
  hasCachedGaussian_ = true;
  return r * std::cos(theta);
}

double StreamRng::exponential(double mean) {
  double u = uniform01();
  while (u <= 0.0) u = uniform01();
  return -mean * std::log(u);
}

std::uint64_t StreamRng::below(std::uint64_t bound) {
  // rejection sampling keeps the draw exactly uniform
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t v = nextU64();
  while (v >= limit) v = nextU64();
  return v % bound;
}

}  // namespace wiretap
