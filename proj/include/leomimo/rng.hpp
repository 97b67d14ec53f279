// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <numbers>

namespace leomimo {

// Counter-mode SplitMix64 generator. Chosen over std::mt19937_64 because
// stream construction is a single add (we key one stream per drop/trial/link,
// millions of them) and because the standard distributions are not guaranteed
// to produce identical sequences across library implementations; results must
// be byte-identical for a fixed seed everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform on [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal, Box-Muller (pair cached)
  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    // u1 in (0, 1] so the log is finite
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // circularly-symmetric complex normal CN(0, 1): unit total variance
  std::complex<double> cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

namespace stream {
// Purpose tags for derived RNG streams. Keeping them centralized avoids
// accidental stream collisions between modules.
inline constexpr std::uint64_t kConstellation = 0x01;
inline constexpr std::uint64_t kUsers = 0x02;
inline constexpr std::uint64_t kSnapshotTime = 0x03;
inline constexpr std::uint64_t kShadowing = 0x04;
inline constexpr std::uint64_t kAoa = 0x05;
inline constexpr std::uint64_t kFading = 0x06;
inline constexpr std::uint64_t kPilotNoise = 0x07;
}  // namespace stream

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derives a decorrelated child seed from (master, tag, indices). Draws made
// from a substream depend only on the key, never on what other code consumed.
inline std::uint64_t substream(std::uint64_t master, std::uint64_t tag,
                               std::uint64_t a = 0, std::uint64_t b = 0,
                               std::uint64_t c = 0) {
  std::uint64_t h = mix64(master ^ 0xA0761D6478BD642FULL);
  h = mix64(h ^ (tag + 0x9E3779B97F4A7C15ULL));
  h = mix64(h ^ (a + 0xE7037ED1A0B428DBULL));
  h = mix64(h ^ (b + 0x8EBC6AF09C88C6E3ULL));
  h = mix64(h ^ (c + 0x589965CC75374CC3ULL));
  return h;
}

}  // namespace leomimo
