#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace sbm {

/// Philox4x32-10 counter-based generator.
///
/// A stream is identified by (seed, stream_id, substream); the generator output
/// is a pure function of those keys and the draw index, so a path simulated by
/// any worker yields the same numbers.
class Philox {
 public:
  using result_type = std::uint64_t;

  Philox(std::uint64_t seed, std::uint32_t stream_id, std::uint64_t substream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream_id),
        substream_(substream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 2) refill();
    return buffer_[pos_++];
  }

  std::uint64_t draws() const { return counter_ * 2 - (2 - pos_); }

 private:
  void refill() {
    std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(counter_),
                                        static_cast<std::uint32_t>(counter_ >> 32),
                                        static_cast<std::uint32_t>(substream_),
                                        static_cast<std::uint32_t>(substream_ >> 32) ^ stream_};
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    buffer_[0] = (std::uint64_t{ctr[0]} << 32) | ctr[1];
    buffer_[1] = (std::uint64_t{ctr[2]} << 32) | ctr[3];
    ++counter_;
    pos_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_;
  std::uint64_t substream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int pos_ = 2;
};

/// Uniform on the open interval (0, 1).
template <class Rng>
double uniform_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

template <class Rng>
double standard_exponential(Rng& rng) {
  return -std::log(uniform_open(rng));
}

/// Standard normal by Box-Muller; one uniform pair per call, no cached state.
template <class Rng>
double standard_normal(Rng& rng) {
  const double u1 = uniform_open(rng);
  const double u2 = uniform_open(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace sbm
