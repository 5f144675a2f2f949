#pragma once

#include <cstdint>
#include <random>

#include "clreach/common.hpp"

namespace clreach {

// Deterministic uniform doubles in [0, 1). std::uniform_real_distribution is
// not pinned across standard library implementations, so draw the 53 high bits
// of the engine output directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Vector uniform_vector(const Vector& lo, const Vector& hi) {
    Vector out(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) out[i] = uniform(lo[i], hi[i]);
    return out;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace clreach
