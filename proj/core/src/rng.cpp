#include "slog/rng.hpp"

#include <cmath>

#include "slog/errors.hpp"

namespace slog {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  // Feed both words through SplitMix64 so that sequential tags land far
  // apart even when seeds are small integers.
  SplitMix64 mix(seed ^ (0x9E3779B97F4A7C15ULL * (tag + 1)));
  std::uint64_t out = mix.next();
  out ^= mix.next();
  return out;
}

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  SplitMix64 mix(seed);
  for (auto& word : s_) word = mix.next();
  // xoshiro requires a nonzero state; SplitMix64 makes all-zero output
  // astronomically unlikely, but guard anyway.
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t Rng::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::normal() {
  for (;;) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

bool Rng::bernoulli(double p) {
  if (p < 0.0 || p > 1.0) throw InvalidArgument("bernoulli: p outside [0,1]");
  return uniform() < p;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("below: n must be positive");
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = n * (~std::uint64_t{0} / n);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

}  // namespace slog
