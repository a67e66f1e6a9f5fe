#pragma once

#include <cstdint>
#include <cmath>

namespace qperc {

// Seedable, forkable generator (splitmix64 core). Every stochastic
// operation in the library takes an explicit Rng handle so runs are
// reproducible bit-for-bit; parallel loops fork one child stream per
// trial index, which makes results independent of thread schedule.
//
// Distributions are hand-rolled (Box-Muller for normals) instead of
// <random> so that sequences do not depend on the standard library
// implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // Scramble so that small seeds (0, 1, 2, ...) give unrelated streams.
    next_u64();
    next_u64();
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in {0, ..., n-1}, n >= 1.
  std::int64_t uniform_below(std::int64_t n) {
    return static_cast<std::int64_t>(uniform() * static_cast<double>(n)) % n;
  }

  // Standard normal via Box-Muller; generates pairs, caches the spare.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // Independent child stream. Deterministic in (current state, stream id)
  // and does not advance this generator, so forking in a parallel loop by
  // index yields schedule-independent results.
  Rng fork(std::uint64_t stream) const {
    std::uint64_t z = state_ ^ (0xD1B54A32D192ED03ULL * (stream + 1));
    z = (z ^ (z >> 29)) * 0xFF51AFD7ED558CCDULL;
    return Rng(z);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qperc
