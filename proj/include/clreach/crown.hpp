#pragma once

#include <optional>
#include <vector>

#include "clreach/network.hpp"
#include "clreach/sets.hpp"

namespace clreach {

struct EmptyDomain : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class SlopeMode { Adaptive, ZeroLower };

// Lower-relaxation slope choice for unstable ReLUs, with optional per-layer
// overrides (indexed like FeedforwardNetwork::layers).
struct SlopePolicy {
  SlopeMode mode = SlopeMode::Adaptive;
  std::vector<std::optional<SlopeMode>> overrides;

  SlopeMode for_layer(std::size_t layer) const {
    if (layer < overrides.size() && overrides[layer]) return *overrides[layer];
    return mode;
  }
};

// Policy for a network that went through augment_with_control_limits: the two
// clip stages keep zero-slope lower relaxations so the concretized control
// range never escapes the limits.
SlopePolicy clip_slope_policy(const FeedforwardNetwork& augmented, SlopeMode base = SlopeMode::Adaptive);

// Affine envelope of a network over a box of inputs:
// Phi·y + beta ≤ net(y) ≤ Psi·y + alpha for all y in domain.
struct AffineEnvelope {
  Matrix Psi;
  Matrix Phi;
  Vector alpha;
  Vector beta;
  Box domain;

  Eigen::Index out_dim() const { return Psi.rows(); }
};

// How per-neuron pre-activation bounds are obtained before relaxation:
// backward affine propagation (tight) or plain interval arithmetic.
enum class PreactivationMode { Crown, Interval };

AffineEnvelope crown_envelope(const FeedforwardNetwork& net, const Box& domain,
                              const SlopePolicy& policy = {},
                              PreactivationMode preact = PreactivationMode::Crown);

Box concretize(const AffineEnvelope& env);

}  // namespace clreach
