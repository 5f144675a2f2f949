#include "clreach/network.hpp"

namespace clreach {

FeedforwardNetwork::FeedforwardNetwork(std::vector<Layer> layers_) : layers(std::move(layers_)) {
  require(!layers.empty(), "network: no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer& layer = layers[l];
    require(layer.W.rows() == layer.b.size(), "network: weight/bias row mismatch");
    if (l > 0) {
      require(layer.W.cols() == layers[l - 1].W.rows(), "network: layer dimensions do not chain");
    }
  }
  require(layers.back().activation == Activation::Identity,
          "network: final layer must be affine");
}

Vector evaluate(const FeedforwardNetwork& net, const Vector& input) {
  require(input.size() == net.input_dim(), "evaluate: input dimension mismatch");
  Vector z = input;
  for (const Layer& layer : net.layers) {
    z = (layer.W * z + layer.b).eval();
    if (layer.activation == Activation::ReLU) z = z.cwiseMax(0.0);
  }
  return z;
}

FeedforwardNetwork augment_with_control_limits(const FeedforwardNetwork& net, const Vector& u_lo,
                                               const Vector& u_hi) {
  const Eigen::Index nu = net.output_dim();
  require(u_lo.size() == nu && u_hi.size() == nu, "augment: limit dimension mismatch");
  if (!(u_lo.array() <= u_hi.array()).all()) {
    throw LimitOrderViolation("augment: u_lo exceeds u_hi");
  }
  std::vector<Layer> layers = net.layers;
  layers.back().b -= u_lo;
  layers.back().activation = Activation::ReLU;
  const Matrix neg_eye = -Matrix::Identity(nu, nu);
  layers.push_back({neg_eye, u_hi - u_lo, Activation::ReLU});
  layers.push_back({neg_eye, u_hi, Activation::Identity});
  return FeedforwardNetwork(std::move(layers));
}

}  // namespace clreach
