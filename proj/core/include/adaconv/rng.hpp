#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace adaconv {

// SplitMix64 finalizer, used only to spread user-supplied seeds.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of the independent stream `index` of family `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ (0xd1342543de82ef95ULL * (index + 1)));
}

// Seedable 64-bit generator used everywhere; mt19937_64 output is fully
// specified by the standard, so runs are bit-reproducible across platforms.
// Uniform doubles are produced with an explicit 53-bit conversion instead of
// std::uniform_real_distribution, whose output is implementation-defined.
class RngStream {
 public:
  static constexpr std::string_view kName = "mt19937-64";

  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace adaconv
