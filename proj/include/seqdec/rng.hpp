#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace seqdec {

// Counter-mode splitmix64. Output i of a stream is mix(key + (i+1)*gamma),
// a pure function of (key, i), so streams can be split per purpose and per
// trial and evaluated in any order while reproducing bit-identically.
class CounterRng {
 public:
  // Recorded in codebooks and result rows; covers both the stream derivation
  // and the Gaussian sampling method below.
  static constexpr const char* kEngineId = "splitmix64-v1";
  static constexpr const char* kGaussMethod = "polar-box-muller";

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Key for the stream identified by (master seed, purpose tag, index).
  static std::uint64_t derive_key(std::uint64_t master, std::string_view purpose,
                                  std::uint64_t index = 0) {
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over the purpose tag
    for (unsigned char c : purpose) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    h = mix(h ^ mix(master ^ 0xA0761D6478BD642Full));
    return mix(h + index * kGamma);
  }

  static CounterRng stream(std::uint64_t master, std::string_view purpose,
                           std::uint64_t index = 0) {
    return CounterRng(derive_key(master, purpose, index));
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

  // Uniform in [0,1), 53-bit resolution.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0,1]; safe under log().
  double next_double_open() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // Uniform in [0, bound) via 128-bit multiply-shift.
  std::uint64_t next_below(std::uint64_t bound) {
    return std::uint64_t((static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  // Circularly symmetric complex Gaussian with E|z|^2 = mean_sq
  // (polar Box-Muller: |z|^2 ~ Exp(mean_sq), phase uniform).
  std::complex<double> next_isotropic_gaussian(double mean_sq) {
    const double r = std::sqrt(-mean_sq * std::log(next_double_open()));
    return std::polar(r, 2.0 * std::numbers::pi * next_double());
  }

  // Standard normal.
  double next_gaussian() {
    const double r = std::sqrt(-2.0 * std::log(next_double_open()));
    return r * std::cos(2.0 * std::numbers::pi * next_double());
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace seqdec
