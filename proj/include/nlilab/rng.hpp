#ifndef NLILAB_RNG_HPP
#define NLILAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "nlilab/types.hpp"

namespace nlilab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Independent stream id for (master seed, power index, block index, purpose).
/// Purposes keep bit and noise draws decoupled so a block's channel output
/// does not depend on which DSP schemes are evaluated afterwards.
enum class StreamPurpose : std::uint64_t { Bits = 1, Ase = 2, Training = 3, Generic = 4 };

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t power_idx,
                                 std::uint64_t block_idx, StreamPurpose purpose) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s ^= (power_idx + 1) * 0x9e3779b97f4a7c15ull;
  h ^= splitmix64(s);
  s ^= (block_idx + 1) * 0xc2b2ae3d27d4eb4full;
  h ^= splitmix64(s);
  s ^= static_cast<std::uint64_t>(purpose) * 0x165667b19e3779f9ull;
  h ^= splitmix64(s);
  return h;
}

/// Deterministic Gaussian sampler (Box-Muller on explicit 53-bit uniforms);
/// avoids the implementation-defined std::normal_distribution.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // in (0,1]
    return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * M_PI * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  /// Circularly symmetric complex Gaussian with total variance var.
  cplx complex_normal(double var) {
    const double s = std::sqrt(var / 2.0);
    const double re = s * normal();
    const double im = s * normal();
    return {re, im};
  }

  std::uint64_t next_u64() { return eng_(); }
  bool bit() { return (eng_() >> 63) != 0; }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nlilab

#endif
