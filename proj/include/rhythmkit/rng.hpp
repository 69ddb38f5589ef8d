// rhythmkit/rng.hpp

// Copyright 2026  rhythmkit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef RHYTHMKIT_RNG_HPP_
#define RHYTHMKIT_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace rhythmkit {

/// Seeded random source.  Distributions are derived from raw mt19937_64
/// output instead of <random> distribution objects, so a fixed seed
/// reproduces bit-identical streams across standard library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1), 53 random mantissa bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], both ends inclusive.
  int uniform_int(int lo, int hi) {
    const double span = static_cast<double>(hi) - static_cast<double>(lo) + 1.0;
    const int v = lo + static_cast<int>(uniform() * span);
    return v > hi ? hi : v;
  }

  /// Standard normal (Box-Muller); the sine twin of each pair is cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  double gaussian(double mean, double sd) { return mean + sd * gaussian(); }

  /// Fresh 64-bit value, used to seed child generators.
  uint64_t draw_seed() { return engine_(); }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 finalizer; decorrelates nearby seeds.
inline uint64_t mix_seed(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Child seed for stream `stream` of a run seeded with `master`.  Parallel
/// trial loops derive one generator per trial through this function.
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
  return mix_seed(master ^ mix_seed(stream + 1));
}

}  // namespace rhythmkit

#endif  // RHYTHMKIT_RNG_HPP_
