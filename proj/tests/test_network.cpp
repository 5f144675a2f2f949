#include <doctest.h>

#include "clreach/network.hpp"
#include "clreach/random.hpp"
#include "oracles.hpp"

using namespace clreach;

namespace {

FeedforwardNetwork scalar_relu_chain() {
  // f(y) = relu(y), expressed as relu stage followed by identity read-out.
  Layer hidden{Matrix::Identity(1, 1), Vector::Zero(1), Activation::ReLU};
  Layer out{Matrix::Identity(1, 1), Vector::Zero(1), Activation::Identity};
  return FeedforwardNetwork({hidden, out});
}

}  // namespace

TEST_CASE("a single identity layer is an affine map") {
  Matrix W(2, 3);
  W << 1, 2, 3, 4, 5, 6;
  Vector b(2);
  b << -1, 1;
  FeedforwardNetwork net({Layer{W, b, Activation::Identity}});
  CHECK(net.input_dim() == 3);
  CHECK(net.output_dim() == 2);
  Vector x(3);
  x << 1, 0, -1;
  const Vector y = evaluate(net, x);
  CHECK(y[0] == doctest::Approx(-3.0));
  CHECK(y[1] == doctest::Approx(-1.0));
}

TEST_CASE("relu clamps negatives and passes positives") {
  const FeedforwardNetwork net = scalar_relu_chain();
  Vector neg(1), pos(1);
  neg << -2.0;
  pos << 3.0;
  CHECK(evaluate(net, neg)[0] == doctest::Approx(0.0));
  CHECK(evaluate(net, pos)[0] == doctest::Approx(3.0));
}

TEST_CASE("evaluate matches a plain loop implementation") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const FeedforwardNetwork net = oracle::random_network(rng, {3, 6, 5, 2});
    for (int k = 0; k < 50; ++k) {
      Vector x(3);
      x << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
      const Vector a = evaluate(net, x);
      const Vector b = oracle::forward_pass(net, x);
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("construction validates layer shapes") {
  Layer ok{Matrix::Identity(2, 2), Vector::Zero(2), Activation::Identity};
  Layer bad_bias{Matrix::Identity(2, 2), Vector::Zero(3), Activation::Identity};
  CHECK_THROWS_AS(FeedforwardNetwork({bad_bias}), DimensionMismatch);

  Layer first{Matrix::Identity(3, 2), Vector::Zero(3), Activation::ReLU};
  Layer mismatched{Matrix::Identity(2, 4), Vector::Zero(2), Activation::Identity};
  CHECK_THROWS_AS(FeedforwardNetwork({first, mismatched}), DimensionMismatch);

  Layer relu_out{Matrix::Identity(2, 2), Vector::Zero(2), Activation::ReLU};
  CHECK_THROWS_AS(FeedforwardNetwork({relu_out}), DimensionMismatch);

  CHECK_THROWS_AS(FeedforwardNetwork(std::vector<Layer>{}), DimensionMismatch);
  CHECK_NOTHROW(FeedforwardNetwork({ok}));
}

TEST_CASE("control-limit augmentation reproduces exact clipping") {
  Rng rng(41);
  const FeedforwardNetwork net = oracle::random_network(rng, {2, 8, 8, 2}, 2.0, 1.0);
  Vector lo(2), hi(2);
  lo << -1.0, -0.5;
  hi << 1.0, 0.25;
  const FeedforwardNetwork aug = augment_with_control_limits(net, lo, hi);
  CHECK(aug.layers.size() == net.layers.size() + 2);
  CHECK(aug.layers.back().activation == Activation::Identity);
  CHECK(aug.layers[aug.layers.size() - 2].activation == Activation::ReLU);
  CHECK(aug.layers[aug.layers.size() - 3].activation == Activation::ReLU);

  for (int k = 0; k < 1000; ++k) {
    Vector y(2);
    y << rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0);
    const Vector clipped = oracle::clip(evaluate(net, y), lo, hi);
    const Vector augmented = evaluate(aug, y);
    CHECK((clipped - augmented).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("augmentation with saturating inputs hits both limits") {
  // f(y) = 3y so inputs past +-1/3 saturate at the limits.
  FeedforwardNetwork net({Layer{3.0 * Matrix::Identity(1, 1), Vector::Zero(1),
                                Activation::Identity}});
  Vector lo = Vector::Constant(1, -1.0);
  Vector hi = Vector::Constant(1, 1.0);
  const FeedforwardNetwork aug = augment_with_control_limits(net, lo, hi);
  Vector y(1);
  y << 2.0;
  CHECK(evaluate(aug, y)[0] == doctest::Approx(1.0));
  y << -2.0;
  CHECK(evaluate(aug, y)[0] == doctest::Approx(-1.0));
  y << 0.1;
  CHECK(evaluate(aug, y)[0] == doctest::Approx(0.3));
}

TEST_CASE("augmentation rejects crossed limits and bad shapes") {
  const FeedforwardNetwork net = scalar_relu_chain();
  Vector lo(1), hi(1);
  lo << 1.0;
  hi << -1.0;
  CHECK_THROWS_AS(augment_with_control_limits(net, lo, hi), LimitOrderViolation);
  Vector lo2(2), hi2(2);
  lo2.setZero();
  hi2.setOnes();
  CHECK_THROWS_AS(augment_with_control_limits(net, lo2, hi2), DimensionMismatch);
}
