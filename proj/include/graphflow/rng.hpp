#ifndef GRAPHFLOW_RNG_HPP
#define GRAPHFLOW_RNG_HPP

#include <cstdint>

namespace graphflow {

// Counter-based generator built on the SplitMix64 finalizer. Every random
// quantity in the engine is a pure function of (seed, counter), which makes
// runs reproducible bit-for-bit across platforms:
//
//   x      = seed + (counter + 1) * 0x9e3779b97f4a7c15
//   x      = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9
//   x      = (x ^ (x >> 27)) * 0x94d049bb133111eb
//   out    = x ^ (x >> 31)
//   u(0,1) = (out >> 11) * 2^-53
inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t x = seed + (counter + 1) * 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(counter_hash(seed, counter) >> 11) * 0x1.0p-53;
}

// Sequential convenience wrapper over the same primitive.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed) {}
  double next_uniform() { return uniform01(seed_, counter_++); }
  std::uint64_t next_u64() { return counter_hash(seed_, counter_++); }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace graphflow

#endif
