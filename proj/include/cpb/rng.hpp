#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace cpb {

namespace rng_detail {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace rng_detail

/// Counter-based random stream keyed by (seed, purpose tag, entity index).
/// Every entity (node, replication, sample) owns its own stream, so results
/// do not depend on evaluation order or thread count. The generator is a
/// SplitMix64 walk; distributions are implemented here rather than with
/// <random> adaptors because the standard distributions are not
/// implementation-portable.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0) {
    using namespace rng_detail;
    state_ = mix64(seed + kGolden);
    state_ = mix64(state_ ^ fnv1a(tag));
    state_ = mix64(state_ ^ (index * kGolden + 1));
  }

  std::uint64_t next_u64() {
    state_ += rng_detail::kGolden;
    return rng_detail::mix64(state_);
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bernoulli(double p) { return next_double() < p; }

  /// Exponential with the given rate; rate must be positive.
  double next_exponential(double rate) { return -std::log1p(-next_double()) / rate; }

  /// Uniform integer in [0, n), n >= 1. Unbiased (Lemire's method).
  std::uint64_t next_below(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        m = static_cast<unsigned __int128>(next_u64()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Fisher-Yates shuffle.
  template <class T>
  void shuffle(T* data, std::size_t n) {
    for (std::size_t i = n; i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      T tmp = data[i - 1];
      data[i - 1] = data[j];
      data[j] = tmp;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace cpb
