// End-to-end acceptance checks for the closed-loop reachability library.
// Each check prints exactly one PASS/FAIL line; the exit code is the number
// of failed checks. Tolerances and workloads are fixed here on purpose so a
// regression anywhere in the pipeline shows up as a flipped line.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <clreach/backward.hpp>
#include <clreach/config.hpp>
#include <clreach/fixtures.hpp>
#include <clreach/partition.hpp>
#include <clreach/verify.hpp>

#include "oracles.hpp"

using namespace clreach;
using clock_type = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

template <class F>
double best_call_us(F&& f, int reps, int trials = 5) {
  double best = 1e30;
  for (int trial = 0; trial < trials; ++trial) {
    auto t0 = clock_type::now();
    for (int i = 0; i < reps; ++i) f();
    best = std::min(best, seconds_since(t0) * 1e6 / reps);
  }
  return best;
}

Box initial_box(const AnalysisConfig& cfg) {
  const LpBall& ball = std::get<LpBall>(*cfg.initial);
  return Box(ball.center - ball.radius, ball.center + ball.radius);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return std::string(buf);
}

// 1: every sampled rollout stays inside the forward reach sets, and the
// unpartitioned closed-form run finishes fast.
Outcome check_forward_soundness() {
  AnalysisConfig cfg = parse_config(make_fixture("double_integrator", 0));
  const LtvSequence seq = cfg.sequence();

  const auto t0 = clock_type::now();
  const ReachSequence reach = propagate(seq, cfg.network, *cfg.initial, *cfg.horizon, cfg.spec);
  const double run_s = seconds_since(t0);

  const Box x0 = initial_box(cfg);
  Rng rng(1);
  long checked = 0;
  long misses = 0;
  for (int i = 0; i < 10000; ++i) {
    const Vector start = rng.uniform_vector(x0.lo, x0.hi);
    const auto traj = simulate_rollout(seq, cfg.network, start, *cfg.horizon, rng.raw());
    for (std::size_t t = 0; t < traj.size(); ++t) {
      ++checked;
      if (!reach.steps[t].contains(traj[t], 1e-9)) ++misses;
    }
  }
  Outcome out;
  out.pass = misses == 0 && run_s < 1.0;
  out.detail = std::to_string(checked - misses) + "/" + std::to_string(checked) +
               " rollout states contained" + fmt("; solo run %.3f ms", run_s * 1e3);
  return out;
}

// 2: closed-form and LP facet bounds agree on random problems.
Outcome check_solver_equivalence() {
  Rng rng(2);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    Matrix A(2, 2), B(2, 1);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) A(r, c) = rng.uniform(-1.0, 1.0);
      B(r, 0) = rng.uniform(-1.0, 1.0);
    }
    Vector c(2), wlo(2), nlo(2);
    for (int r = 0; r < 2; ++r) {
      c[r] = rng.uniform(-0.5, 0.5);
      wlo[r] = rng.uniform(0.0, 0.1);
      nlo[r] = rng.uniform(0.0, 0.05);
    }
    const LtvSystem sys(A, B, Matrix::Identity(2, 2), c, -wlo, wlo, -nlo, nlo);
    const FeedforwardNetwork net = oracle::random_network(rng, {2, 5, 1});
    const Box box = oracle::random_box(rng, 2);
    const InputSet input = box.to_ball();

    Matrix facets(4, 2);
    facets.topRows(2).setIdentity();
    for (int r = 2; r < 4; ++r) {
      const double ang = rng.uniform(0.0, M_PI);
      facets.row(r) << std::cos(ang), std::sin(ang);
    }

    const AffineEnvelope env = crown_envelope(net, observation_box(sys, input));
    const ClosedLoopEnvelope cl = closed_loop_envelope(env, sys, facets);
    const FacetAffine fa = facet_affine(cl, sys, facets);
    const FacetBounds cf = facet_bounds(fa, input, FacetSolver::ClosedForm);
    const FacetBounds lp = facet_bounds(fa, input, FacetSolver::LP);
    worst = std::max(worst, (cf.gamma_U - lp.gamma_U).cwiseAbs().maxCoeff());
    worst = std::max(worst, (cf.gamma_L - lp.gamma_L).cwiseAbs().maxCoeff());
  }
  Outcome out;
  out.pass = worst <= 1e-6;
  out.detail = fmt("largest gamma gap %.3g over 100 random instances (allow 1e-6)", worst);
  return out;
}

// 3: uniform partitioning tightens the final-step error, monotonically in
// the cell count.
Outcome check_partition_tightening() {
  AnalysisConfig cfg = parse_config(make_fixture("double_integrator", 0));
  const LtvSequence seq = cfg.sequence();
  const Box x0 = initial_box(cfg);
  const auto mc = mc_reach_estimate(seq, cfg.network, x0, *cfg.horizon,
                                    cfg.partition.mc_samples, cfg.partition.seed);

  const double plain =
      tightness_error(propagate(seq, cfg.network, *cfg.initial, *cfg.horizon, cfg.spec), mc)
          .back();
  PartitionConfig pc = cfg.partition;
  pc.strategy = PartitionStrategy::Uniform;
  pc.r = {2, 2};
  const double cells4 =
      tightness_error(propagate_uniform(seq, cfg.network, x0, *cfg.horizon, cfg.spec, pc), mc)
          .back();
  pc.r = {4, 4};
  const double cells16 =
      tightness_error(propagate_uniform(seq, cfg.network, x0, *cfg.horizon, cfg.spec, pc), mc)
          .back();

  Outcome out;
  out.pass = cells16 <= 0.5 * plain && cells16 <= cells4 + 1e-12;
  out.detail = fmt("final error %.3f unpartitioned, %.3f at 4 cells, %.3f at 16", plain, cells4,
                   cells16);
  return out;
}

// 4: evaluating facet bounds in closed form beats solving them as LPs, at the
// exact per-step workloads of the fixture run.
Outcome check_closed_form_speed() {
  AnalysisConfig cfg = parse_config(make_fixture("double_integrator", 0));
  const LtvSequence seq = cfg.sequence();
  const ReachSequence reach =
      propagate(seq, cfg.network, *cfg.initial, *cfg.horizon, cfg.spec);

  ReachSpec lp_spec = cfg.spec;
  lp_spec.solver = FacetSolver::LP;
  const double full_cf =
      best_call_us([&] { propagate(seq, cfg.network, *cfg.initial, *cfg.horizon, cfg.spec); },
                   300);
  const double full_lp =
      best_call_us([&] { propagate(seq, cfg.network, *cfg.initial, *cfg.horizon, lp_spec); },
                   300);

  double cf_us = 0.0, lp_us = 0.0;
  double sink = 0.0;
  for (std::size_t t = 0; t < *cfg.horizon; ++t) {
    const InputSet input = t == 0 ? *cfg.initial : as_input_set(reach.steps[t].members[0]);
    const LtvSystem& sys = seq.at(t);
    const Matrix facets = cfg.spec.facet_matrix(sys.state_dim());
    const AffineEnvelope env = crown_envelope(cfg.network, observation_box(sys, input));
    const ClosedLoopEnvelope cl = closed_loop_envelope(env, sys, facets);
    const FacetAffine fa = facet_affine(cl, sys, facets);
    cf_us += best_call_us(
        [&] { sink += facet_bounds(fa, input, FacetSolver::ClosedForm).gamma_U.sum(); }, 20000);
    lp_us += best_call_us(
        [&] { sink += facet_bounds(fa, input, FacetSolver::LP).gamma_U.sum(); }, 4000);
  }
  const double ratio = lp_us / cf_us;

  Outcome out;
  out.pass = ratio >= 5.0 && std::isfinite(sink);
  out.detail = fmt("bound evaluation %.2f us closed form vs %.2f us LP per run", cf_us, lp_us) +
               fmt(" (%.1fx, need 5x); whole runs %.1fx apart", ratio, full_lp / full_cf);
  return out;
}

// 5: more facet directions never loosen the box hull of the final polytope.
Outcome check_facet_ablation() {
  AnalysisConfig cfg = parse_config(make_fixture("double_integrator", 0));
  const LtvSequence seq = cfg.sequence();
  std::vector<double> volume;
  for (int F : {4, 8, 16}) {
    // Supply F/2 directions; the set conversion stacks their negations, so
    // the reach polytopes carry 4, 8, and 16 evenly spaced rows.
    const int half = F / 2;
    Matrix facets(half, 2);
    for (int k = 0; k < half; ++k) {
      const double ang = M_PI * k / half;
      facets.row(k) << std::cos(ang), std::sin(ang);
    }
    ReachSpec spec = cfg.spec;
    spec.facets = facets;
    const ReachSequence reach = propagate(seq, cfg.network, *cfg.initial, *cfg.horizon, spec);
    volume.push_back(box_hull(reach.steps.back()).volume());
  }
  Outcome out;
  out.pass = volume[1] <= volume[0] + 1e-9 && volume[2] <= volume[1] + 1e-9;
  out.detail = fmt("final hull volume %.4f -> %.4f -> %.4f over 4/8/16 directions", volume[0],
                   volume[1], volume[2]);
  return out;
}

// 6: the limit-augmented network clips exactly, and reach sets computed with
// limits never imply controls outside them.
Outcome check_control_limits() {
  AnalysisConfig cfg = parse_config(make_fixture("double_integrator", 0));
  const Vector u_lo = Vector::Constant(1, -1.0);
  const Vector u_hi = Vector::Constant(1, 1.0);
  const FeedforwardNetwork aug = augment_with_control_limits(cfg.network, u_lo, u_hi);

  Rng rng(3);
  double worst_eval = 0.0;
  const Vector in_lo = Vector::Constant(2, -5.0);
  const Vector in_hi = Vector::Constant(2, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const Vector y = rng.uniform_vector(in_lo, in_hi);
    const Vector direct = oracle::clip(evaluate(cfg.network, y), u_lo, u_hi);
    worst_eval = std::max(worst_eval, (evaluate(aug, y) - direct).cwiseAbs().maxCoeff());
  }

  LtvSystem sys = cfg.systems[0];
  sys.u_limits = ControlLimits{u_lo, u_hi};
  const SlopePolicy policy = clip_slope_policy(aug);
  const ReachSequence reach =
      propagate(LtvSequence(sys), aug, *cfg.initial, *cfg.horizon, ReachSpec{}, policy);
  double overshoot = 0.0;
  for (std::size_t t = 0; t < *cfg.horizon; ++t) {
    const InputSet input = t == 0 ? *cfg.initial : as_input_set(reach.steps[t].members[0]);
    const Box range = concretize(crown_envelope(aug, observation_box(sys, input), policy));
    overshoot = std::max(overshoot, range.hi.maxCoeff() - 1.0);
    overshoot = std::max(overshoot, -1.0 - range.lo.minCoeff());
  }

  Outcome out;
  out.pass = worst_eval <= 1e-12 && overshoot <= 1e-9;
  out.detail = fmt("clip mismatch %.2g over 1000 inputs; certified control overshoot %.2g",
                   worst_eval, overshoot);
  return out;
}

// 7: noisy quadrotor rollouts stay inside the reach sets, and the noise-free
// sets nest inside the noisy ones.
Outcome check_noise_handling() {
  AnalysisConfig cfg = parse_config(make_fixture("quadrotor_6d", 0));
  const LtvSystem& noisy = cfg.systems[0];
  const LtvSystem quiet = LtvSystem::noiseless(noisy.A, noisy.B, noisy.C, noisy.c);
  const ReachSequence rn =
      propagate(LtvSequence(noisy), cfg.network, *cfg.initial, *cfg.horizon, cfg.spec);
  const ReachSequence rq =
      propagate(LtvSequence(quiet), cfg.network, *cfg.initial, *cfg.horizon, cfg.spec);

  bool nested = true;
  for (std::size_t t = 0; t < rn.steps.size(); ++t) {
    nested = nested && check_containment(box_hull(rq.steps[t]), box_hull(rn.steps[t]), 1e-9);
  }

  const Box x0 = initial_box(cfg);
  Rng rng(1);
  long checked = 0;
  long misses = 0;
  for (int i = 0; i < 10000; ++i) {
    const Vector start = rng.uniform_vector(x0.lo, x0.hi);
    const auto traj = simulate_rollout(LtvSequence(noisy), cfg.network, start, *cfg.horizon,
                                       rng.raw());
    for (std::size_t t = 0; t < traj.size(); ++t) {
      ++checked;
      if (!rn.steps[t].contains(traj[t], 1e-9)) ++misses;
    }
  }

  Outcome out;
  out.pass = misses == 0 && nested;
  out.detail = std::to_string(checked - misses) + "/" + std::to_string(checked) +
               " noisy rollout states contained; noise-free sets nested: " +
               (nested ? "yes" : "no");
  return out;
}

// 8: every sampled backprojection point reaches the target in one step, and
// finer partitions never shrink the covered share of the target.
Outcome check_backprojection() {
  AnalysisConfig cfg = parse_config(make_fixture("double_integrator", 0));
  LtvSystem sys = cfg.systems[0];
  sys.u_limits = ControlLimits{Vector::Constant(1, -1.0), Vector::Constant(1, 1.0)};
  const FeedforwardNetwork aug =
      augment_with_control_limits(cfg.network, sys.u_limits->lo, sys.u_limits->hi);
  const SlopePolicy policy = clip_slope_policy(aug);
  const Box target{(Vector(2) << 2.5, -0.25).finished(), (Vector(2) << 3.0, 0.25).finished()};

  const BackprojectionResult bp16 = estimate_backprojection(sys, aug, target, 1, {16, 16}, policy);
  const double landing = backprojection_coverage(bp16, sys, aug, target, 1000, 5);

  // Fraction of a 20x20 grid over the target hit by one-step images of
  // points sampled from the returned union.
  const auto occupancy = [&](const std::vector<int>& r) {
    const BackprojectionResult bp = estimate_backprojection(sys, aug, target, 1, r, policy);
    const int G = 20;
    std::vector<char> hit(G * G, 0);
    Rng rng(6);
    const std::size_t m = bp.steps[1].members.size();
    for (std::size_t i = 0; i < m; ++i) {
      const SetMember& member = bp.steps[1].members[i];
      const Box hull = box_hull(member);
      const int quota = 4000 / static_cast<int>(m) + (i < 4000 % m ? 1 : 0);
      int got = 0;
      for (int a = 0; a < 100 * quota && got < quota; ++a) {
        const Vector x = rng.uniform_vector(hull.lo, hull.hi);
        if (!std::visit([&](const auto& s) { return s.contains(x, 1e-12); }, member)) continue;
        ++got;
        Vector u = evaluate(aug, x);
        u = u.cwiseMax(sys.u_limits->lo).cwiseMin(sys.u_limits->hi);
        const Vector next = sys.A * x + sys.B * u + sys.c;
        if (!target.contains(next, 1e-9)) continue;
        const int gx = std::min(
            G - 1, static_cast<int>(G * (next[0] - target.lo[0]) / (target.hi[0] - target.lo[0])));
        const int gy = std::min(
            G - 1, static_cast<int>(G * (next[1] - target.lo[1]) / (target.hi[1] - target.lo[1])));
        hit[gx * G + gy] = 1;
      }
    }
    int covered = 0;
    for (const char h : hit) covered += h;
    return static_cast<double>(covered) / (G * G);
  };

  std::vector<double> occ;
  for (int r : {2, 4, 8, 16}) occ.push_back(occupancy({r, r}));
  bool monotone = true;
  for (std::size_t i = 1; i < occ.size(); ++i) monotone = monotone && occ[i] >= occ[i - 1] - 0.02;

  Outcome out;
  out.pass = landing == 1.0 && monotone;
  out.detail = fmt("landing fraction %.4f at 16x16;", landing) +
               fmt(" target coverage %.3f/%.3f", occ[0], occ[1]) +
               fmt("/%.3f/%.3f over 2/4/8/16 cells per side", occ[2], occ[3]);
  return out;
}

// 9: the greedy partitioner is monotone in budget, and budget 1 reproduces
// the unpartitioned propagator exactly.
Outcome check_greedy_partitioner() {
  AnalysisConfig cfg = parse_config(make_fixture("double_integrator", 0));
  const LtvSequence seq = cfg.sequence();
  const Box x0 = initial_box(cfg);
  const auto mc = mc_reach_estimate(seq, cfg.network, x0, *cfg.horizon,
                                    cfg.partition.mc_samples, cfg.partition.seed);

  PartitionConfig pc = cfg.partition;
  pc.strategy = PartitionStrategy::GreedySimGuided;
  std::vector<double> err;
  ReachSequence first;
  for (int budget : {1, 5, 15, 35, 75}) {
    pc.budget = budget;
    ReachSequence reach =
        propagate_greedy_sim_guided(seq, cfg.network, x0, *cfg.horizon, cfg.spec, pc);
    err.push_back(tightness_error(reach, mc).back());
    if (budget == 1) first = std::move(reach);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < err.size(); ++i) monotone = monotone && err[i] <= err[i - 1] + 1e-9;

  const ReachSequence plain =
      propagate(seq, cfg.network, *cfg.initial, *cfg.horizon, cfg.spec);
  bool identical = first.steps.size() == plain.steps.size();
  for (std::size_t t = 1; identical && t < plain.steps.size(); ++t) {
    identical = first.steps[t].members.size() == 1 && plain.steps[t].members.size() == 1;
    if (!identical) break;
    const Box& a = std::get<Box>(first.steps[t].members[0]);
    const Box& b = std::get<Box>(plain.steps[t].members[0]);
    identical = a.lo == b.lo && a.hi == b.hi;
  }

  Outcome out;
  out.pass = monotone && identical;
  std::ostringstream oss;
  oss << "final error by budget:";
  const int budgets[] = {1, 5, 15, 35, 75};
  for (std::size_t i = 0; i < err.size(); ++i)
    oss << " " << budgets[i] << "->" << fmt("%.3f", err[i]);
  oss << (identical ? "; budget 1 matches solo run" : "; budget 1 DIFFERS from solo run");
  out.detail = oss.str();
  return out;
}

// 10: a stabilizing-gain scenario verifies against goal and avoid sets, MC
// agrees, and a 10x smaller goal flips the verdict.
Outcome check_verification_scenario() {
  const double k0 = 0.43448324, k1 = 1.02846593;
  Layer hidden{Matrix(2, 2), Vector::Zero(2), Activation::ReLU};
  hidden.W << -k0, -k1, k0, k1;
  Layer readout{Matrix(1, 2), Vector::Zero(1), Activation::Identity};
  readout.W << 1.0, -1.0;
  const FeedforwardNetwork net(std::vector<Layer>{hidden, readout});

  const LtvSystem sys = LtvSystem::noiseless((Matrix(2, 2) << 1, 1, 0, 1).finished(),
                                             (Matrix(2, 1) << 0.5, 1).finished(),
                                             Matrix::Identity(2, 2), Vector::Zero(2));
  const Box x0{(Vector(2) << -3.0, -0.25).finished(), (Vector(2) << -2.5, 0.25).finished()};
  const Box goal{(Vector(2) << -0.5, -0.25).finished(), (Vector(2) << 0.5, 0.25).finished()};
  const Box small_goal{(Vector(2) << -0.05, -0.025).finished(),
                       (Vector(2) << 0.05, 0.025).finished()};
  const HPolytope avoid((Matrix(1, 2) << -1.0, 0.0).finished(),
                        (Vector(1) << -0.35).finished());
  const std::size_t horizon = 5;

  PartitionConfig pc;
  pc.strategy = PartitionStrategy::Uniform;
  pc.r = {4, 4};
  const ReachSequence reach =
      propagate_uniform(LtvSequence(sys), net, x0, horizon, ReachSpec{}, pc);

  const ReachAvoidSpec wide{SetMember(goal), {{SetMember(avoid)}}, horizon};
  const ReachAvoidSpec narrow{SetMember(small_goal), {{SetMember(avoid)}}, horizon};
  const Verdict ok = check_reach_avoid(reach, wide);
  const Verdict shrunk = check_reach_avoid(reach, narrow);

  Rng rng(10);
  int mc_bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vector start = rng.uniform_vector(x0.lo, x0.hi);
    const auto traj = simulate_rollout(LtvSequence(sys), net, start, horizon, rng.raw());
    for (const Vector& x : traj)
      if (x[0] >= 0.35) ++mc_bad;
    if (!goal.contains(traj.back(), 1e-9)) ++mc_bad;
  }

  Outcome out;
  out.pass = ok.verified && !shrunk.verified && mc_bad == 0;
  out.detail = std::string("16-cell run verified=") + (ok.verified ? "yes" : "no") +
               ", shrunk goal verified=" + (shrunk.verified ? "yes" : "no") + ", " +
               std::to_string(mc_bad) + " MC violations";
  return out;
}

// 11: affine envelopes never cross sampled network outputs.
Outcome check_envelope_soundness() {
  Rng rng(4);
  long checked = 0;
  long violations = 0;
  for (int i = 0; i < 100; ++i) {
    const int depth = 1 + i % 4;
    std::vector<int> widths;
    widths.push_back(1 + static_cast<int>(rng.uniform(0.0, 4.0)));
    for (int d = 0; d < depth; ++d)
      widths.push_back(1 + static_cast<int>(rng.uniform(0.0, 16.0)));
    widths.push_back(1 + static_cast<int>(rng.uniform(0.0, 3.0)));
    const FeedforwardNetwork net = oracle::random_network(rng, widths);
    const Box domain = oracle::random_box(rng, widths.front());
    const AffineEnvelope env = crown_envelope(net, domain);
    for (int s = 0; s < 10000; ++s) {
      const Vector y = rng.uniform_vector(domain.lo, domain.hi);
      const Vector value = oracle::forward_pass(net, y);
      const Vector up = env.Psi * y + env.alpha;
      const Vector dn = env.Phi * y + env.beta;
      ++checked;
      if ((value - up).maxCoeff() > 1e-9 || (dn - value).maxCoeff() > 1e-9) ++violations;
    }
  }
  Outcome out;
  out.pass = violations == 0;
  out.detail = std::to_string(violations) + " envelope violations over " +
               std::to_string(checked) + " samples from 100 random networks";
  return out;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> checks[] = {
      {"forward reach sets contain rollouts", check_forward_soundness},
      {"closed-form and LP bounds agree", check_solver_equivalence},
      {"uniform partitioning tightens bounds", check_partition_tightening},
      {"closed-form bound evaluation is faster", check_closed_form_speed},
      {"extra facets never loosen the hull", check_facet_ablation},
      {"control limits hold exactly and certified", check_control_limits},
      {"noise is handled soundly and monotonically", check_noise_handling},
      {"backprojection points reach the target", check_backprojection},
      {"greedy partitioning refines with budget", check_greedy_partitioner},
      {"reach-avoid scenario verifies correctly", check_verification_scenario},
      {"network envelopes are sound", check_envelope_soundness},
  };

  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : checks) {
    ++index;
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    if (!outcome.pass) ++failed;
    std::printf("[%2d/11] %s  %s: %s\n", index, outcome.pass ? "PASS" : "FAIL", name,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  if (failed > 0) std::printf("%d of 11 checks failed\n", failed);
  return failed;
}
