#pragma once

#include <optional>
#include <vector>

#include "clreach/network.hpp"
#include "clreach/random.hpp"
#include "clreach/sets.hpp"

namespace clreach {

struct NoiseOutOfSupport : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ControlLimits {
  Vector lo;
  Vector hi;
};

// Discrete-time plant x' = A·x + B·u + c + ω with observation y = Cᵀ·x + ν.
// Noise supports are element-wise boxes; u_limits clip controls in rollouts.
struct LtvSystem {
  Matrix A;
  Matrix B;
  Matrix C;
  Vector c;
  Vector omega_lo, omega_hi;
  Vector nu_lo, nu_hi;
  std::optional<ControlLimits> u_limits;

  LtvSystem() = default;
  LtvSystem(Matrix A_, Matrix B_, Matrix C_, Vector c_, Vector omega_lo_, Vector omega_hi_,
            Vector nu_lo_, Vector nu_hi_, std::optional<ControlLimits> u_limits_ = std::nullopt);

  // Noise-free convenience: supports collapse to zero.
  static LtvSystem noiseless(Matrix A_, Matrix B_, Matrix C_, Vector c_,
                             std::optional<ControlLimits> u_limits_ = std::nullopt);

  Eigen::Index state_dim() const { return A.rows(); }
  Eigen::Index control_dim() const { return B.cols(); }
  Eigen::Index obs_dim() const { return C.cols(); }
};

// Per-timestep system list with repeat-last semantics; a single system acts
// as time-invariant dynamics.
struct LtvSequence {
  std::vector<LtvSystem> systems;

  LtvSequence(LtvSystem sys) : systems{std::move(sys)} {}
  LtvSequence(std::vector<LtvSystem> systems_);

  const LtvSystem& at(std::size_t t) const {
    return systems[std::min(t, systems.size() - 1)];
  }
};

Vector step(const LtvSystem& sys, const Vector& x, const Vector& u, const Vector& omega);

Vector observe(const LtvSystem& sys, const Vector& x, const Vector& nu);

// Closed-loop rollout: per step draw ν, evaluate the network on Cᵀx+ν (clipped
// to u_limits when present), draw ω, then step. Deterministic given seed;
// returns horizon+1 states starting at x0.
std::vector<Vector> simulate_rollout(const LtvSequence& seq, const FeedforwardNetwork& net,
                                     const Vector& x0, std::size_t horizon, std::uint64_t seed);

}  // namespace clreach
