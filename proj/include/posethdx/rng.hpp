#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace posethdx {

// Reproducible cochain sampler. Doubles are derived from the raw 64-bit
// stream instead of std::uniform_real_distribution, whose output is
// implementation-defined; reports quoting a seed must replay byte-identically.
class TrialRng {
 public:
  explicit TrialRng(uint64_t seed) : gen_(seed) {}

  // Uniform in [-1, 1).
  double next() {
    const uint64_t r = gen_();
    return static_cast<double>(r >> 11) * (2.0 / 9007199254740992.0) - 1.0;
  }

  std::vector<double> vector(int n) {
    std::vector<double> v(n);
    for (double& x : v) x = next();
    return v;
  }

 private:
  std::mt19937_64 gen_;
};

inline constexpr uint64_t kDefaultSeed = 0x5eed5eedULL;
inline constexpr int kDefaultTrials = 100;

}  // namespace posethdx
