#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace pursuit {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         std::array<std::uint32_t, 2>& key) {
  const std::uint64_t p0 = 0xD2511F53ULL * ctr[0];
  const std::uint64_t p1 = 0xCD9E8D57ULL * ctr[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  key[0] += 0x9E3779B9U;
  key[1] += 0xBB67AE85U;
}

}  // namespace detail

// Counter-based stream (Philox-4x32-10).  A stream is a pure function of
// (root_seed, stream_id, position): trials scheduled on different threads
// draw from disjoint substreams and reproduce bit-for-bit in any order.
class RngStream {
 public:
  RngStream(std::uint64_t root_seed, std::uint64_t stream_id)
      : root_seed_(root_seed), stream_id_(stream_id) {
    const std::uint64_t k =
        detail::splitmix64(detail::splitmix64(root_seed) ^ stream_id);
    key0_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  }

  std::uint64_t root_seed() const { return root_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Derived substream; children with distinct indices never share blocks.
  RngStream substream(std::uint64_t index) const {
    return RngStream(root_seed_,
                     detail::splitmix64(stream_id_ + 0x9E3779B97F4A7C15ULL * (index + 1)));
  }

  std::uint64_t next_u64() {
    if (have_ >= 2) {
      have_ = 0;
      ++block_;
    }
    if (have_ == 0) {
      std::array<std::uint32_t, 4> ctr = {
          static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
          0u, 0u};
      auto key = key0_;
      for (int r = 0; r < 10; ++r) detail::philox_round(ctr, key);
      out_[0] = (static_cast<std::uint64_t>(ctr[1]) << 32) | ctr[0];
      out_[1] = (static_cast<std::uint64_t>(ctr[3]) << 32) | ctr[2];
    }
    return out_[have_++];
  }

  // Uniform on (0,1]; never returns 0 so it is safe under log().
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Uniform on [0,1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Box-Muller with one cached value.
  double normal() {
    if (have_normal_) {
      have_normal_ = false;
      return cached_normal_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586477 * u2;
    cached_normal_ = r * std::sin(a);
    have_normal_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t root_seed_;
  std::uint64_t stream_id_;
  std::array<std::uint32_t, 2> key0_{};
  std::uint64_t block_ = 0;
  int have_ = 0;
  std::array<std::uint64_t, 2> out_{};
  bool have_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace pursuit
