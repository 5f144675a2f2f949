#include "clreach/forward.hpp"

namespace clreach {

Matrix selector(const Vector& z, const Matrix& A, const Matrix& B) {
  require(A.rows() == B.rows() && A.cols() == B.cols(), "selector: matrix shape mismatch");
  require(z.size() == A.rows(), "selector: sign vector length mismatch");
  Matrix out(A.rows(), A.cols());
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    out.row(r) = (z[r] >= 0.0) ? A.row(r) : B.row(r);
  }
  return out;
}

Vector selector(const Vector& z, const Vector& a, const Vector& b) {
  require(a.size() == b.size(), "selector: vector length mismatch");
  require(z.size() == a.size(), "selector: sign vector length mismatch");
  Vector out(a.size());
  for (Eigen::Index r = 0; r < a.size(); ++r) {
    out[r] = (z[r] >= 0.0) ? a[r] : b[r];
  }
  return out;
}

ClosedLoopEnvelope closed_loop_envelope(const AffineEnvelope& env, const LtvSystem& sys,
                                        const Matrix& facets) {
  require(facets.cols() == sys.state_dim(), "closed_loop_envelope: facet dimension mismatch");
  require(env.out_dim() == sys.control_dim(), "closed_loop_envelope: envelope output mismatch");
  const Eigen::Index m = facets.rows();
  ClosedLoopEnvelope cl;
  cl.Upsilon.reserve(m);
  cl.Xi.reserve(m);
  cl.Gamma.resize(sys.control_dim(), m);
  cl.Delta.resize(sys.control_dim(), m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vector z = (facets.row(i) * sys.B).transpose();
    cl.Upsilon.push_back(selector(z, env.Psi, env.Phi));
    cl.Xi.push_back(selector(z, env.Phi, env.Psi));
    cl.Gamma.col(i) = selector(z, env.alpha, env.beta);
    cl.Delta.col(i) = selector(z, env.beta, env.alpha);
  }
  return cl;
}

FacetAffine facet_affine(const ClosedLoopEnvelope& clenv, const LtvSystem& sys,
                         const Matrix& facets) {
  const Eigen::Index m = facets.rows();
  require(static_cast<Eigen::Index>(clenv.Upsilon.size()) == m,
          "facet_affine: envelope facet count mismatch");
  const Matrix Ct = sys.C.transpose();
  FacetAffine fa;
  fa.M_U.resize(m, sys.state_dim());
  fa.M_L.resize(m, sys.state_dim());
  fa.n_U.resize(m);
  fa.n_L.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Matrix& Ups = clenv.Upsilon[static_cast<std::size_t>(i)];
    const Matrix& Xi = clenv.Xi[static_cast<std::size_t>(i)];
    fa.M_U.row(i) = facets.row(i) * (sys.A + sys.B * Ups * Ct);
    fa.M_L.row(i) = facets.row(i) * (sys.A + sys.B * Xi * Ct);

    // Worst-case measurement noise per observation dimension, chosen by the
    // sign of its coefficient in the composed facet row; worst-case process
    // noise by the sign of the facet row itself.
    const Vector wu = (facets.row(i) * sys.B * Ups).transpose();
    const Vector wl = (facets.row(i) * sys.B * Xi).transpose();
    const Vector nu_up = selector(wu, sys.nu_hi, sys.nu_lo);
    const Vector nu_lo = selector(wl, sys.nu_lo, sys.nu_hi);
    const Vector fr = facets.row(i).transpose();
    const Vector om_up = selector(fr, sys.omega_hi, sys.omega_lo);
    const Vector om_lo = selector(fr, sys.omega_lo, sys.omega_hi);

    fa.n_U[i] =
        facets.row(i) * (sys.B * (Ups * nu_up + clenv.Gamma.col(i)) + sys.c + om_up);
    fa.n_L[i] =
        facets.row(i) * (sys.B * (Xi * nu_lo + clenv.Delta.col(i)) + sys.c + om_lo);
  }
  return fa;
}

FacetBounds facet_bounds(const FacetAffine& fa, const InputSet& input, FacetSolver solver) {
  const Eigen::Index m = fa.M_U.rows();
  FacetBounds out;
  out.gamma_U.resize(m);
  out.gamma_L.resize(m);
  if (solver == FacetSolver::ClosedForm) {
    const LpBall* ball = std::get_if<LpBall>(&input);
    if (ball == nullptr) {
      throw SolverError("facet_bounds: closed form needs a ball input; use the LP path");
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      out.gamma_U[i] = support_value(fa.M_U.row(i).transpose(), *ball) + fa.n_U[i];
      out.gamma_L[i] = -support_value(-fa.M_L.row(i).transpose(), *ball) + fa.n_L[i];
    }
    return out;
  }
  HPolytope poly;
  if (const LpBall* ball = std::get_if<LpBall>(&input)) {
    if (ball->p != kInf) {
      throw SolverError("facet_bounds: LP path supports box and polytope inputs only");
    }
    poly = Box(ball->center - ball->radius, ball->center + ball->radius).to_polytope();
  } else {
    poly = std::get<HPolytope>(input);
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    out.gamma_U[i] = lp_solve(fa.M_U.row(i).transpose(), poly).value + fa.n_U[i];
    out.gamma_L[i] = -lp_solve(-fa.M_L.row(i).transpose(), poly).value + fa.n_L[i];
  }
  return out;
}

SetMember to_reach_set(const FacetBounds& bounds, const ReachSpec& spec, Eigen::Index n_x) {
  const Vector& gu = bounds.gamma_U;
  const Vector& gl = bounds.gamma_L;
  if ((gl.array() > gu.array() + 1e-9).any()) {
    throw DegenerateBounds("to_reach_set: lower facet bound exceeds upper");
  }
  if (spec.output_shape() == OutputShape::Box) {
    return Box(gl.cwiseMin(gu), gu);
  }
  const Matrix facets = spec.facet_matrix(n_x);
  Matrix A(2 * facets.rows(), facets.cols());
  A << facets, -facets;
  Vector b(2 * gu.size());
  b << gu, -gl;
  return HPolytope(std::move(A), std::move(b));
}

Box observation_box(const LtvSystem& sys, const InputSet& input) {
  const Eigen::Index ny = sys.obs_dim();
  Vector lo(ny), hi(ny);
  for (Eigen::Index j = 0; j < ny; ++j) {
    const Vector d = sys.C.col(j);
    const auto upper = [&](const auto& s) { return support_value(d, s); };
    const auto lower = [&](const auto& s) { return -support_value(Vector(-d), s); };
    hi[j] = std::visit(upper, input) + sys.nu_hi[j];
    lo[j] = std::visit(lower, input) + sys.nu_lo[j];
  }
  return Box(std::move(lo), std::move(hi));
}

SetMember propagate_step(const LtvSystem& sys, const FeedforwardNetwork& net,
                         const InputSet& input, const ReachSpec& spec, const SlopePolicy& policy,
                         std::vector<std::string>* warnings) {
  FacetSolver solver = spec.solver;
  if (solver == FacetSolver::ClosedForm && std::holds_alternative<HPolytope>(input)) {
    solver = FacetSolver::LP;
    if (warnings != nullptr) {
      warnings->push_back("closed-form solver needs a ball input; fell back to LP for a polytope step");
    }
  }
  const Box obs = observation_box(sys, input);
  const AffineEnvelope env = crown_envelope(net, obs, policy);
  const Matrix facets = spec.facet_matrix(sys.state_dim());
  const ClosedLoopEnvelope clenv = closed_loop_envelope(env, sys, facets);
  const FacetAffine fa = facet_affine(clenv, sys, facets);
  const FacetBounds bounds = facet_bounds(fa, input, solver);
  return to_reach_set(bounds, spec, sys.state_dim());
}

InputSet as_input_set(const SetMember& member) {
  if (const Box* box = std::get_if<Box>(&member)) return box->to_ball();
  return std::get<HPolytope>(member);
}

namespace {

SetMember initial_record(const InputSet& x0) {
  if (const HPolytope* poly = std::get_if<HPolytope>(&x0)) return *poly;
  const LpBall& ball = std::get<LpBall>(x0);
  return Box(ball.center - ball.radius, ball.center + ball.radius);
}

}  // namespace

ReachSequence propagate(const LtvSequence& seq, const FeedforwardNetwork& net,
                        const InputSet& x0, std::size_t horizon, const ReachSpec& spec,
                        const SlopePolicy& policy) {
  require(horizon >= 1, "propagate: horizon must be at least 1");
  ReachSequence out;
  out.steps.resize(horizon + 1);
  out.steps[0].members.push_back(initial_record(x0));
  InputSet cur = x0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    SetMember next = propagate_step(seq.at(t - 1), net, cur, spec, policy, &out.warnings);
    cur = as_input_set(next);
    out.steps[t].members.push_back(std::move(next));
  }
  return out;
}

}  // namespace clreach
