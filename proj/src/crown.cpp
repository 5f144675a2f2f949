#include "clreach/crown.hpp"

#include <cmath>

namespace clreach {

namespace {

// Per-neuron relaxation lines: dl·a + el ≤ act(a) ≤ du·a + eu on [lo, up].
struct Lines {
  Vector du, eu, dl, el;
};

Lines relax(const Layer& layer, const Vector& lo, const Vector& up, SlopeMode mode) {
  const Eigen::Index n = lo.size();
  Lines L{Vector(n), Vector(n), Vector(n), Vector(n)};
  if (layer.activation == Activation::Identity) {
    L.du.setOnes();
    L.dl.setOnes();
    L.eu.setZero();
    L.el.setZero();
    return L;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = lo[i];
    const double u = up[i];
    if (l == u) {
      const double v = std::max(l, 0.0);
      L.du[i] = L.dl[i] = 0.0;
      L.eu[i] = L.el[i] = v;
    } else if (l >= 0.0) {
      L.du[i] = L.dl[i] = 1.0;
      L.eu[i] = L.el[i] = 0.0;
    } else if (u <= 0.0) {
      L.du[i] = L.dl[i] = 0.0;
      L.eu[i] = L.el[i] = 0.0;
    } else {
      const double s = u / (u - l);
      L.du[i] = s;
      L.eu[i] = -l * s;
      L.dl[i] = (mode == SlopeMode::ZeroLower) ? 0.0 : (u >= -l ? 1.0 : 0.0);
      L.el[i] = 0.0;
    }
  }
  return L;
}

struct AffinePair {
  Matrix Au, Al;
  Vector cu, cl;
};

// Backward pass: affine bounds on layer k's pre-activation in terms of the
// network input, substituting stored relaxation lines for layers below k.
// Positive coefficients pick the relaxation on their own side, negative ones
// the opposite side.
AffinePair backward(const std::vector<Layer>& layers, const std::vector<Lines>& lines,
                    std::size_t k) {
  AffinePair P{layers[k].W, layers[k].W, layers[k].b, layers[k].b};
  for (std::size_t j = k; j-- > 0;) {
    const Lines& L = lines[j];
    const Eigen::Index rows = P.Au.rows();
    const Eigen::Index cols = P.Au.cols();
    Matrix Su(rows, cols), Sl(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        const double au = P.Au(r, c);
        if (au >= 0.0) {
          Su(r, c) = au * L.du[c];
          P.cu[r] += au * L.eu[c];
        } else {
          Su(r, c) = au * L.dl[c];
          P.cu[r] += au * L.el[c];
        }
        const double al = P.Al(r, c);
        if (al >= 0.0) {
          Sl(r, c) = al * L.dl[c];
          P.cl[r] += al * L.el[c];
        } else {
          Sl(r, c) = al * L.du[c];
          P.cl[r] += al * L.eu[c];
        }
      }
    }
    P.cu += Su * layers[j].b;
    P.cl += Sl * layers[j].b;
    P.Au = Su * layers[j].W;
    P.Al = Sl * layers[j].W;
  }
  return P;
}

void concretize_pair(const AffinePair& P, const Box& domain, Vector& lo, Vector& up) {
  const Vector ctr = domain.center();
  const Vector rad = domain.radius();
  up = P.Au * ctr + P.Au.cwiseAbs() * rad + P.cu;
  lo = P.Al * ctr - P.Al.cwiseAbs() * rad + P.cl;
}

}  // namespace

SlopePolicy clip_slope_policy(const FeedforwardNetwork& augmented, SlopeMode base) {
  require(augmented.layers.size() >= 3, "clip_slope_policy: network has no clip stages");
  SlopePolicy p;
  p.mode = base;
  p.overrides.assign(augmented.layers.size(), std::nullopt);
  p.overrides[augmented.layers.size() - 3] = SlopeMode::ZeroLower;
  p.overrides[augmented.layers.size() - 2] = SlopeMode::ZeroLower;
  return p;
}

AffineEnvelope crown_envelope(const FeedforwardNetwork& net, const Box& domain,
                              const SlopePolicy& policy, PreactivationMode preact) {
  require(net.input_dim() == domain.dim(), "crown_envelope: domain dimension mismatch");
  if (domain.lo.size() == 0 || !(domain.lo.array() <= domain.hi.array()).all()) {
    throw EmptyDomain("crown_envelope: empty input domain");
  }
  const std::size_t L = net.layers.size();
  std::vector<Lines> lines(L);

  if (preact == PreactivationMode::Interval) {
    Vector zlo = domain.lo;
    Vector zhi = domain.hi;
    for (std::size_t l = 0; l < L; ++l) {
      const Layer& layer = net.layers[l];
      const Vector mid = 0.5 * (zlo + zhi);
      const Vector rad = 0.5 * (zhi - zlo);
      const Vector amid = layer.W * mid + layer.b;
      const Vector arad = layer.W.cwiseAbs() * rad;
      const Vector alo = amid - arad;
      const Vector ahi = amid + arad;
      lines[l] = relax(layer, alo, ahi, policy.for_layer(l));
      if (layer.activation == Activation::ReLU) {
        zlo = alo.cwiseMax(0.0);
        zhi = ahi.cwiseMax(0.0);
      } else {
        zlo = alo;
        zhi = ahi;
      }
    }
  } else {
    for (std::size_t l = 0; l < L; ++l) {
      const Layer& layer = net.layers[l];
      if (layer.activation == Activation::Identity) {
        // Affine stages need no relaxation, so skip the backward pass that
        // would only feed pre-activation bounds into it.
        const Eigen::Index n = layer.W.rows();
        lines[l] = Lines{Vector::Ones(n), Vector::Zero(n), Vector::Ones(n), Vector::Zero(n)};
        continue;
      }
      const AffinePair P = backward(net.layers, lines, l);
      Vector alo, ahi;
      concretize_pair(P, domain, alo, ahi);
      lines[l] = relax(layer, alo, ahi, policy.for_layer(l));
    }
  }

  const AffinePair P = backward(net.layers, lines, L - 1);
  AffineEnvelope env;
  env.Psi = P.Au;
  env.alpha = P.cu;
  env.Phi = P.Al;
  env.beta = P.cl;
  env.domain = domain;
  return env;
}

Box concretize(const AffineEnvelope& env) {
  const AffinePair P{env.Psi, env.Phi, env.alpha, env.beta};
  Vector lo, up;
  concretize_pair(P, env.domain, lo, up);
  return Box(lo, up.cwiseMax(lo));
}

}  // namespace clreach
