#pragma once

#include <array>
#include <cstdint>

namespace slog {

// Counter-free deterministic PRNG stack used for every random draw in the
// library. Streams are xoshiro256++ generators whose 256-bit state is
// expanded from a 64-bit seed with SplitMix64, the initialization recommended
// by the xoshiro authors. Child streams are derived by hashing (seed, tag)
// pairs, so independent draws (per batch, per filter, per noise realization)
// never share a stream. All integer arithmetic, hence bit-exact across
// platforms; floating-point outputs additionally depend only on IEEE-754
// double operations plus libm's log/sqrt for the Gaussian path.

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

// Hash a (seed, tag) pair into a new 64-bit seed. Used for stream splitting;
// nest calls to derive deeper stream trees, e.g. derive(derive(s, FILTERS), q).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

// Well-known stream tags for dataset generation and training.
namespace streams {
constexpr std::uint64_t kGraph = 1;
constexpr std::uint64_t kSources = 2;
constexpr std::uint64_t kFilters = 3;
constexpr std::uint64_t kNoise = 4;
constexpr std::uint64_t kValidation = 5;
constexpr std::uint64_t kModelInit = 6;
constexpr std::uint64_t kForwardInit = 7;
constexpr std::uint64_t kShuffle = 8;
constexpr std::uint64_t kTest = 9;
}  // namespace streams

class Rng {
 public:
  // Expands the seed into the 256-bit xoshiro state via SplitMix64.
  explicit Rng(std::uint64_t seed);

  // An independent generator for (this seed, tag).
  Rng child(std::uint64_t tag) const { return Rng(derive_seed(seed_, tag)); }

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Uniform on (lo, hi).
  double uniform(double lo, double hi);

  // Standard normal via Marsaglia's polar method. The spare deviate is
  // discarded so consumption is one accept-reject loop per call.
  double normal();

  bool bernoulli(double p);

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_;
};

}  // namespace slog
