#pragma once

// Stream-indexed random numbers. A stream is fully determined by
// (master_seed, stream_index); deriving one is O(1) and needs no shared state,
// so workers can create the stream for any global object index on demand.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace ewinfo {

inline constexpr std::string_view kRngIdentifier =
    "xoshiro256**; streams keyed by splitmix64(master_seed, stream_index); Box-Muller normals";

namespace detail {
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
} // namespace detail

class RngStream {
public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : master_seed_(master_seed), stream_index_(stream_index) {
    std::uint64_t key = detail::splitmix64_mix(master_seed + 0x9e3779b97f4a7c15ULL);
    key ^= detail::splitmix64_mix(stream_index ^ 0xd1b54a32d192ed03ULL);
    for (auto &word : s_) {
      key += 0x9e3779b97f4a7c15ULL;
      word = detail::splitmix64_mix(key);
    }
  }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = detail::rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Complex standard normal: real and imaginary parts independent N(0, 1/2),
  /// so E|z|^2 = 1.
  std::complex<double> complex_normal() {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

  friend bool operator==(const RngStream &, const RngStream &) = default;

private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::uint64_t s_[4];
};

inline RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
  return RngStream(master_seed, stream_index);
}

/// Stream index layout: the top byte names the object domain, the rest is the
/// object's ordinal within that domain.
enum class StreamDomain : std::uint64_t {
  State = 1,
  OptimalWitness = 2,
  PartialTransposeWitness = 3,
  RandomObservable = 4,
  Diagnostics = 5,
};

constexpr std::uint64_t stream_index(StreamDomain domain, std::uint64_t ordinal) {
  return (static_cast<std::uint64_t>(domain) << 56) | (ordinal & ((1ULL << 56) - 1));
}

} // namespace ewinfo
