#pragma once

#include <vector>

#include "clreach/common.hpp"

namespace clreach {

enum class Activation { ReLU, Identity };

struct Layer {
  Matrix W;
  Vector b;
  Activation activation = Activation::Identity;
};

struct LimitOrderViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Feed-forward control policy. Layer l maps z to act(W·z + b); the final
// layer is always affine (Identity activation).
struct FeedforwardNetwork {
  std::vector<Layer> layers;

  FeedforwardNetwork() = default;
  explicit FeedforwardNetwork(std::vector<Layer> layers_);

  Eigen::Index input_dim() const { return layers.front().W.cols(); }
  Eigen::Index output_dim() const { return layers.back().W.rows(); }
};

Vector evaluate(const FeedforwardNetwork& net, const Vector& input);

// Embeds box control limits into the network itself so that the augmented
// network computes clip(net(y), u_lo, u_hi) exactly: subtract u_lo from the
// final bias, turn the final layer into a ReLU stage, then append
// (-I, u_hi - u_lo, ReLU) and (-I, u_hi, Identity).
FeedforwardNetwork augment_with_control_limits(const FeedforwardNetwork& net, const Vector& u_lo,
                                               const Vector& u_hi);

}  // namespace clreach
