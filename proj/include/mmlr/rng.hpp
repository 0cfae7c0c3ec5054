#pragma once

#include <cstdint>
#include <random>

namespace mmlr {

// Deterministic random source. All distributions are implemented here on
// top of std::mt19937_64 rather than through <random> distribution
// objects, whose output is implementation-defined; this keeps streams
// reproducible for a given seed across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via the trigonometric Box-Muller transform; the
  // second variate of each pair is cached.
  double normal();

  // Uniform integer in [0, bound), bound >= 1, by masked rejection.
  int uniform_below(int bound);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

// Stream derivation: a distinct, well-mixed seed for substream `stream`
// of a root seed (per-trial seeds, per-matrix seeds).
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

}  // namespace mmlr
