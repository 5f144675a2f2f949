#include "clreach/backward.hpp"

namespace clreach {

namespace {

void require_backward_assumptions(const LtvSystem& sys) {
  const Eigen::Index n = sys.state_dim();
  if (sys.obs_dim() != n || !sys.C.isApprox(Matrix::Identity(n, n))) {
    throw ConfigError("backward analysis requires identity observations (C = I)");
  }
  const bool noise_free = sys.omega_lo.isZero(0.0) && sys.omega_hi.isZero(0.0) &&
                          sys.nu_lo.isZero(0.0) && sys.nu_hi.isZero(0.0);
  if (!noise_free) {
    throw ConfigError("backward analysis requires zero noise supports");
  }
}

}  // namespace

Box backreachable_box(const LtvSystem& sys, const SetMember& next_set, const Box& u_set) {
  require_backward_assumptions(sys);
  const Eigen::Index nx = sys.state_dim();
  const Eigen::Index nu = sys.control_dim();
  require(u_set.dim() == nu, "backreachable_box: control set dimension mismatch");

  const HPolytope next = std::visit(
      [](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Box>) {
          return s.to_polytope();
        } else {
          return s;
        }
      },
      next_set);
  require(next.dim() == nx, "backreachable_box: next-set dimension mismatch");

  const Eigen::Index mrows = next.A.rows();
  Matrix A(mrows + 2 * nu, nx + nu);
  Vector b(mrows + 2 * nu);
  A.topLeftCorner(mrows, nx) = next.A * sys.A;
  A.topRightCorner(mrows, nu) = next.A * sys.B;
  b.head(mrows) = next.b - next.A * sys.c;
  A.bottomRows(2 * nu).setZero();
  A.block(mrows, nx, nu, nu) = Matrix::Identity(nu, nu);
  A.block(mrows + nu, nx, nu, nu) = -Matrix::Identity(nu, nu);
  b.segment(mrows, nu) = u_set.hi;
  b.tail(nu) = -u_set.lo;

  const HPolytope joint(std::move(A), std::move(b));
  Vector lo(nx), hi(nx);
  for (Eigen::Index k = 0; k < nx; ++k) {
    Vector d = Vector::Zero(nx + nu);
    d[k] = 1.0;
    hi[k] = lp_solve(d, joint).value;
    d[k] = -1.0;
    lo[k] = -lp_solve(d, joint).value;
  }
  return Box(std::move(lo), std::move(hi));
}

HPolytope backprojection_polytope(const LtvSystem& sys, const AffineEnvelope& env,
                                  const Box& next_box, const Box& cell) {
  require_backward_assumptions(sys);
  const Eigen::Index nx = sys.state_dim();
  require(env.out_dim() == sys.control_dim(), "backprojection_polytope: envelope output mismatch");
  require(next_box.dim() == nx && cell.dim() == nx,
          "backprojection_polytope: box dimension mismatch");

  // Worst-case control per state row: row k of B against the envelope sides.
  Matrix Z_max(nx, nx), Z_min(nx, nx);
  Vector z_max(nx), z_min(nx);
  for (Eigen::Index k = 0; k < nx; ++k) {
    const Vector zb = sys.B.row(k).transpose();
    Z_max.row(k) = sys.B.row(k) * selector(zb, env.Psi, env.Phi);
    Z_min.row(k) = sys.B.row(k) * selector(zb, env.Phi, env.Psi);
    z_max[k] = sys.B.row(k) * selector(zb, env.alpha, env.beta);
    z_min[k] = sys.B.row(k) * selector(zb, env.beta, env.alpha);
  }

  Matrix P(4 * nx, nx);
  Vector p(4 * nx);
  P.topRows(nx) = sys.A + Z_max;
  p.head(nx) = next_box.hi - z_max - sys.c;
  P.middleRows(nx, nx) = -(sys.A + Z_min);
  p.segment(nx, nx) = -next_box.lo + z_min + sys.c;
  P.middleRows(2 * nx, nx) = Matrix::Identity(nx, nx);
  p.segment(2 * nx, nx) = cell.hi;
  P.bottomRows(nx) = -Matrix::Identity(nx, nx);
  p.tail(nx) = -cell.lo;
  return HPolytope(std::move(P), std::move(p));
}

BackprojectionResult estimate_backprojection(const LtvSystem& sys, const FeedforwardNetwork& net,
                                             const Box& target, std::size_t horizon,
                                             const std::vector<int>& r,
                                             const SlopePolicy& policy) {
  require(horizon >= 1, "estimate_backprojection: horizon must be at least 1");
  require_backward_assumptions(sys);
  if (!sys.u_limits) {
    throw MissingControlLimits(
        "estimate_backprojection: control limits required to bound the backreachable set");
  }
  const Box u_set(sys.u_limits->lo, sys.u_limits->hi);

  BackprojectionResult out;
  out.steps.resize(horizon + 1);
  out.steps[0].members.emplace_back(target);
  out.backreachable.reserve(horizon);
  if (horizon >= 2) {
    out.warnings.push_back(
        "multi-step backprojection chains box hulls of intermediate unions; deeper steps are "
        "relative to those hulls");
  }

  Box next_hull = target;
  for (std::size_t k = 1; k <= horizon; ++k) {
    const Box bb = backreachable_box(sys, SetMember(next_hull), u_set);
    out.backreachable.push_back(bb);
    for (const Box& cell : uniform_partition(bb, r)) {
      const AffineEnvelope env = crown_envelope(net, cell, policy);
      HPolytope poly = backprojection_polytope(sys, env, next_hull, cell);
      if (!is_empty(poly)) {
        out.steps[k].members.emplace_back(std::move(poly));
      }
    }
    if (out.steps[k].members.empty()) {
      out.warnings.push_back("backprojection union is empty " + std::to_string(k) +
                             " steps before the target; deeper steps skipped");
      break;
    }
    next_hull = box_hull(out.steps[k]);
  }
  return out;
}

double backprojection_coverage(const BackprojectionResult& result, const LtvSystem& sys,
                               const FeedforwardNetwork& net, const Box& target, int samples,
                               std::uint64_t seed, std::vector<std::string>* warnings) {
  require(samples >= 1, "backprojection_coverage: need at least one sample");
  if (result.steps.size() < 2 || result.steps.back().members.empty()) {
    throw EmptyUnion("backprojection_coverage: deepest union has no members");
  }
  const SetUnion& deepest = result.steps.back();
  const std::size_t m = deepest.members.size();
  Rng rng(seed);

  int collected = 0;
  int landed = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const SetMember& member = deepest.members[i];
    const Box hull = box_hull(member);
    const int quota =
        samples / static_cast<int>(m) + (i < static_cast<std::size_t>(samples) % m ? 1 : 0);
    if (quota == 0) continue;
    int got = 0;
    for (int attempt = 0; attempt < 100 * quota && got < quota; ++attempt) {
      const Vector x = rng.uniform_vector(hull.lo, hull.hi);
      const bool inside =
          std::visit([&](const auto& s) { return s.contains(x, 1e-12); }, member);
      if (!inside) continue;
      ++got;
      ++collected;
      Vector u = evaluate(net, x);
      if (sys.u_limits) u = u.cwiseMax(sys.u_limits->lo).cwiseMin(sys.u_limits->hi);
      const Vector next = sys.A * x + sys.B * u + sys.c;
      if (target.contains(next, 1e-9)) ++landed;
    }
    if (got == 0 && warnings != nullptr) {
      warnings->push_back("backprojection member " + std::to_string(i) +
                          " too thin for rejection sampling; skipped");
    }
  }
  if (collected == 0) {
    throw EmptyUnion("backprojection_coverage: no sample points obtained from the union");
  }
  return static_cast<double>(landed) / static_cast<double>(collected);
}

}  // namespace clreach
