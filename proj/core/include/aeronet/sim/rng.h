#ifndef AERONET_SIM_RNG_H_
#define AERONET_SIM_RNG_H_

#include <array>
#include <cstdint>
#include <string_view>

namespace aeronet {

// Reproducible random stream keyed by (seed, purpose label, index).
//
// Each stream is an independent xoshiro256** generator whose state is
// derived from a SplitMix64 expansion of a hash of the key, so two streams
// with different labels or indices never share draws and a stream's
// sequence does not depend on how other streams were consumed. All
// distributions are implemented here rather than taken from <random>,
// whose distribution algorithms differ between standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0);

  std::uint64_t NextU64();

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  double Uniform(double lo, double hi);
  // Unbiased integer in [0, n). n must be > 0.
  std::uint64_t UniformIndex(std::uint64_t n);
  double Normal();
  double Normal(double mean, double stddev);
  bool Bernoulli(double p);

  std::uint64_t seed() const { return seed_; }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stable 64-bit FNV-1a hash, used for stream keys and trajectory hashes.
std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace aeronet

#endif  // AERONET_SIM_RNG_H_
