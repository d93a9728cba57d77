#ifndef SIMPLEXDIFF_RNG_HPP
#define SIMPLEXDIFF_RNG_HPP

#include <cmath>
#include <cstdint>

namespace simplexdiff {

// Splittable deterministic random stream (splitmix64 core).
// Identical (seed, stream_id) reproduces the exact draw sequence;
// substreams are derived by hashing, so trajectories, coordinates and
// Monte Carlo trials can each own an independent stream.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {
    state_ = mix(seed ^ mix(stream_id ^ 0x6a09e667f3bcc909ULL));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Independent child stream, a pure function of (seed, stream_id, id);
  // nesting is fine.
  RngStream substream(std::uint64_t id) const {
    return RngStream(seed_, mix(stream_id_ * 0x9e3779b97f4a7c15ULL + id + 1));
  }

  // Independent child stream that consumes one draw, so successive splits
  // from the same parent are distinct.
  RngStream split() { return substream(next_u64()); }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal (Box-Muller, pair cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double c = std::cos(6.283185307179586476925287 * u2);
    double s = std::sin(6.283185307179586476925287 * u2);
    spare_ = r * s;
    has_spare_ = true;
    return r * c;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace simplexdiff

#endif
