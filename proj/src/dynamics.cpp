#include "clreach/dynamics.hpp"

namespace clreach {

namespace {
constexpr double kSupportSlack = 1e-12;

void check_support(const Vector& v, const Vector& lo, const Vector& hi, const char* what) {
  require(v.size() == lo.size(), std::string(what) + ": noise dimension mismatch");
  if ((v.array() < lo.array() - kSupportSlack).any() ||
      (v.array() > hi.array() + kSupportSlack).any()) {
    throw NoiseOutOfSupport(std::string(what) + ": noise outside declared support");
  }
}
}  // namespace

LtvSystem::LtvSystem(Matrix A_, Matrix B_, Matrix C_, Vector c_, Vector omega_lo_,
                     Vector omega_hi_, Vector nu_lo_, Vector nu_hi_,
                     std::optional<ControlLimits> u_limits_)
    : A(std::move(A_)),
      B(std::move(B_)),
      C(std::move(C_)),
      c(std::move(c_)),
      omega_lo(std::move(omega_lo_)),
      omega_hi(std::move(omega_hi_)),
      nu_lo(std::move(nu_lo_)),
      nu_hi(std::move(nu_hi_)),
      u_limits(std::move(u_limits_)) {
  const Eigen::Index nx = A.rows();
  require(A.cols() == nx, "system: A must be square");
  require(B.rows() == nx, "system: B row count mismatch");
  require(C.rows() == nx, "system: C row count mismatch");
  require(c.size() == nx, "system: c dimension mismatch");
  require(omega_lo.size() == nx && omega_hi.size() == nx, "system: process-noise dimension mismatch");
  require((omega_lo.array() <= omega_hi.array()).all(), "system: process-noise support inverted");
  require(nu_lo.size() == obs_dim() && nu_hi.size() == obs_dim(),
          "system: measurement-noise dimension mismatch");
  require((nu_lo.array() <= nu_hi.array()).all(), "system: measurement-noise support inverted");
  if (u_limits) {
    require(u_limits->lo.size() == control_dim() && u_limits->hi.size() == control_dim(),
            "system: control-limit dimension mismatch");
    require((u_limits->lo.array() <= u_limits->hi.array()).all(),
            "system: control limits inverted");
  }
}

LtvSystem LtvSystem::noiseless(Matrix A_, Matrix B_, Matrix C_, Vector c_,
                               std::optional<ControlLimits> u_limits_) {
  const Eigen::Index nx = A_.rows();
  const Eigen::Index ny = C_.cols();
  return LtvSystem(std::move(A_), std::move(B_), std::move(C_), std::move(c_),
                   Vector::Zero(nx), Vector::Zero(nx), Vector::Zero(ny), Vector::Zero(ny),
                   std::move(u_limits_));
}

LtvSequence::LtvSequence(std::vector<LtvSystem> systems_) : systems(std::move(systems_)) {
  require(!systems.empty(), "system sequence: empty");
  for (std::size_t t = 1; t < systems.size(); ++t) {
    require(systems[t].state_dim() == systems[0].state_dim() &&
                systems[t].control_dim() == systems[0].control_dim() &&
                systems[t].obs_dim() == systems[0].obs_dim(),
            "system sequence: inconsistent dimensions across timesteps");
  }
}

Vector step(const LtvSystem& sys, const Vector& x, const Vector& u, const Vector& omega) {
  require(x.size() == sys.state_dim(), "step: state dimension mismatch");
  require(u.size() == sys.control_dim(), "step: control dimension mismatch");
  check_support(omega, sys.omega_lo, sys.omega_hi, "step");
  return sys.A * x + sys.B * u + sys.c + omega;
}

Vector observe(const LtvSystem& sys, const Vector& x, const Vector& nu) {
  require(x.size() == sys.state_dim(), "observe: state dimension mismatch");
  check_support(nu, sys.nu_lo, sys.nu_hi, "observe");
  return sys.C.transpose() * x + nu;
}

std::vector<Vector> simulate_rollout(const LtvSequence& seq, const FeedforwardNetwork& net,
                                     const Vector& x0, std::size_t horizon, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vector> traj;
  traj.reserve(horizon + 1);
  traj.push_back(x0);
  Vector x = x0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const LtvSystem& sys = seq.at(t);
    const Vector nu = rng.uniform_vector(sys.nu_lo, sys.nu_hi);
    const Vector y = observe(sys, x, nu);
    Vector u = evaluate(net, y);
    if (sys.u_limits) {
      u = u.cwiseMax(sys.u_limits->lo).cwiseMin(sys.u_limits->hi);
    }
    const Vector omega = rng.uniform_vector(sys.omega_lo, sys.omega_hi);
    x = step(sys, x, u, omega);
    traj.push_back(x);
  }
  return traj;
}

}  // namespace clreach
