#ifndef DPZO_RNG_HPP
#define DPZO_RNG_HPP

#include <array>
#include <cstdint>

namespace dpzo {

// Counter-based random streams. Every draw in the library is a pure function
// of (seed, stream, counter words), so any subset of draws can be replayed or
// computed in parallel without changing results.
//
// Generator: Philox4x64 with 10 rounds (Salmon et al. constants, matching
// numpy.random.Philox). Key = (seed, stream tag), counter = 4x64 context
// words. One block yields 4 output words; we consume word 0 only.
//
// Normal deviates use the fixed recipe
//   u = ((word >> 12) + 0.5) * 2^-52   in (0,1), then
//   z = inverse_normal_cdf(u)          (Wichura AS241, PPND16),
// so checkpoint replays are bit-exact by construction. The 52-bit grid
// keeps both endpoints representable: u ranges over [2^-53, 1 - 2^-53].

struct PhiloxKey {
  uint64_t k0;
  uint64_t k1;
};

std::array<uint64_t, 4> philox4x64(const std::array<uint64_t, 4>& counter,
                                   PhiloxKey key);

// High-precision rational approximation of Phi^-1 (AS241 PPND16).
// Relative error below 1e-15 over (0,1).
double inverse_normal_cdf(double p);

// Disjoint stream tags; mixed into the Philox key so that draws made for one
// purpose can never collide with another even at equal counters.
enum class Stream : uint64_t {
  kDirection = 1,  // perturbation directions during training
  kNoise = 2,      // DP Gaussian noise
  kBatch = 3,      // minibatch index sampling
  kData = 4,       // synthetic dataset / parameter initialization
  kPrune = 5,      // saliency probe directions
};

inline uint64_t raw_u64(uint64_t seed, Stream stream, uint64_t c0, uint64_t c1,
                        uint64_t c2, uint64_t c3) {
  return philox4x64({c0, c1, c2, c3},
                    PhiloxKey{seed, static_cast<uint64_t>(stream)})[0];
}

inline double uniform_open01(uint64_t word) {
  return (static_cast<double>(word >> 12) + 0.5) * 0x1.0p-52;
}

inline double normal_draw(uint64_t seed, Stream stream, uint64_t c0,
                          uint64_t c1, uint64_t c2, uint64_t c3) {
  return inverse_normal_cdf(uniform_open01(raw_u64(seed, stream, c0, c1, c2, c3)));
}

// Uniform integer in [0, bound). Modulo reduction: the tiny bias is
// irrelevant for sampling minibatch indices and determinism is what matters.
inline uint64_t bounded_u64(uint64_t seed, Stream stream, uint64_t c0,
                            uint64_t c1, uint64_t c2, uint64_t c3,
                            uint64_t bound) {
  return raw_u64(seed, stream, c0, c1, c2, c3) % bound;
}

}  // namespace dpzo

#endif  // DPZO_RNG_HPP
