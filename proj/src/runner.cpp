#include "clreach/runner.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

namespace clreach {

namespace {

using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ordered_json vector_json(const Vector& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

ordered_json matrix_json(const Matrix& m) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out.push_back(vector_json(m.row(r).transpose()));
  }
  return out;
}

ordered_json member_json(const SetMember& member) {
  if (const Box* box = std::get_if<Box>(&member)) {
    return {{"type", "box"}, {"lo", vector_json(box->lo)}, {"hi", vector_json(box->hi)}};
  }
  const HPolytope& poly = std::get<HPolytope>(member);
  return {{"type", "polytope"}, {"A", matrix_json(poly.A)}, {"b", vector_json(poly.b)}};
}

ordered_json union_json(const SetUnion& set) {
  ordered_json members = ordered_json::array();
  for (const SetMember& m : set.members) members.push_back(member_json(m));
  return {{"members", std::move(members)}};
}

ordered_json steps_json(const std::vector<SetUnion>& steps) {
  ordered_json out = ordered_json::array();
  for (const SetUnion& s : steps) out.push_back(union_json(s));
  return out;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<SetUnion>& steps, OutputShape shape) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write CSV to '" + path + "'");
  if (shape == OutputShape::Box) {
    out << "timestep,dim,lo,hi\n";
    for (std::size_t t = 0; t < steps.size(); ++t) {
      if (steps[t].members.empty()) continue;
      const Box hull = box_hull(steps[t]);
      for (Eigen::Index d = 0; d < hull.dim(); ++d) {
        out << t << "," << d << "," << fmt17(hull.lo[d]) << "," << fmt17(hull.hi[d]) << "\n";
      }
    }
    return;
  }
  Eigen::Index n = 0;
  for (const SetUnion& s : steps) {
    for (const SetMember& m : s.members) {
      n = std::visit([](const auto& v) { return v.dim(); }, m);
      break;
    }
    if (n > 0) break;
  }
  out << "timestep,facet_index";
  for (Eigen::Index d = 0; d < n; ++d) out << ",a" << d;
  out << ",b\n";
  for (std::size_t t = 0; t < steps.size(); ++t) {
    Eigen::Index facet = 0;
    for (const SetMember& m : steps[t].members) {
      const HPolytope poly = std::visit(
          [](const auto& s) {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Box>) {
              return s.to_polytope();
            } else {
              return s;
            }
          },
          m);
      for (Eigen::Index r = 0; r < poly.A.rows(); ++r, ++facet) {
        out << t << "," << facet;
        for (Eigen::Index d = 0; d < poly.A.cols(); ++d) out << "," << fmt17(poly.A(r, d));
        out << "," << fmt17(poly.b[r]) << "\n";
      }
    }
  }
}

Box initial_box(const InputSet& input) {
  if (const LpBall* ball = std::get_if<LpBall>(&input)) {
    if (ball->p == kInf) return Box(ball->center - ball->radius, ball->center + ball->radius);
  }
  throw ConfigError("this analysis requires a box-shaped initial set");
}

const char* strategy_name(PartitionStrategy s) {
  switch (s) {
    case PartitionStrategy::None:
      return "none";
    case PartitionStrategy::Uniform:
      return "uniform";
    case PartitionStrategy::GreedySimGuided:
      return "greedy";
  }
  return "none";
}

}  // namespace

RunResult run_analysis(const AnalysisConfig& cfg, bool require_verified,
                       const std::string& csv_path) {
  const auto t_start = Clock::now();
  if (!cfg.horizon) {
    throw ConfigError("analysis.horizon: required (set it in the config or pass --horizon)");
  }
  const std::size_t horizon = *cfg.horizon;
  if (require_verified && cfg.mode != AnalysisMode::Verify) {
    throw ConfigError("--require-verified only applies to verify mode");
  }

  // Control limits are embedded into the network so every envelope reflects
  // the clipped policy; limits must not vary across timesteps.
  const std::optional<ControlLimits>& limits = cfg.systems.front().u_limits;
  for (const LtvSystem& sys : cfg.systems) {
    const bool same =
        sys.u_limits.has_value() == limits.has_value() &&
        (!limits || (sys.u_limits->lo == limits->lo && sys.u_limits->hi == limits->hi));
    if (!same) throw ConfigError("system: control limits must be identical across timesteps");
  }
  FeedforwardNetwork net = cfg.network;
  SlopePolicy policy;
  if (limits) {
    net = augment_with_control_limits(net, limits->lo, limits->hi);
    policy = clip_slope_policy(net);
  }
  const LtvSequence seq = cfg.sequence();

  ordered_json doc;
  doc["mode"] = cfg.mode == AnalysisMode::Forward    ? "forward"
                : cfg.mode == AnalysisMode::Backward ? "backward"
                                                     : "verify";
  doc["horizon"] = horizon;
  doc["seed"] = cfg.partition.seed;
  doc["solver"] = cfg.spec.solver == FacetSolver::ClosedForm ? "closed-form" : "lp";
  doc["output_shape"] = cfg.spec.output_shape() == OutputShape::Box ? "box" : "polytope";
  std::vector<std::string> warnings;
  ordered_json timing;

  int exit_code = 0;
  if (cfg.mode == AnalysisMode::Backward) {
    if (cfg.systems.size() != 1) {
      throw ConfigError("backward mode supports a single (time-invariant) system block");
    }
    std::vector<int> r = cfg.partition.r;
    const Eigen::Index nx = cfg.systems.front().state_dim();
    if (r.empty()) r.assign(static_cast<std::size_t>(nx), 1);
    if (static_cast<Eigen::Index>(r.size()) != nx) {
      throw ConfigError("partitioner.cells: need one count per state dimension");
    }
    doc["cells"] = r;
    const auto t0 = Clock::now();
    BackprojectionResult est =
        estimate_backprojection(cfg.systems.front(), net, *cfg.target, horizon, r, policy);
    timing["estimate_s"] = seconds_since(t0);
    warnings = est.warnings;

    const auto t1 = Clock::now();
    ordered_json coverage;
    try {
      coverage = backprojection_coverage(est, cfg.systems.front(), net, *cfg.target,
                                         cfg.partition.mc_samples, cfg.partition.seed, &warnings);
    } catch (const EmptyUnion&) {
      coverage = nullptr;
      warnings.push_back("coverage skipped: backprojection union is empty");
    }
    timing["coverage_s"] = seconds_since(t1);

    doc["backprojection"] = steps_json(est.steps);
    ordered_json breach = ordered_json::array();
    for (const Box& b : est.backreachable) breach.push_back(member_json(SetMember(b)));
    doc["backreachable"] = std::move(breach);
    doc["coverage"] = std::move(coverage);
    if (!csv_path.empty()) write_csv(csv_path, est.steps, OutputShape::Polytope);
  } else {
    const InputSet& x0 = *cfg.initial;
    ReachSequence reach;
    const auto t0 = Clock::now();
    switch (cfg.partition.strategy) {
      case PartitionStrategy::None:
        doc["cells"] = nullptr;
        reach = propagate(seq, net, x0, horizon, cfg.spec, policy);
        break;
      case PartitionStrategy::Uniform: {
        if (cfg.partition.r.empty()) {
          throw ConfigError("partitioner.cells: required for the uniform strategy");
        }
        doc["cells"] = cfg.partition.r;
        reach = propagate_uniform(seq, net, initial_box(x0), horizon, cfg.spec, cfg.partition,
                                  policy, cfg.jobs);
        break;
      }
      case PartitionStrategy::GreedySimGuided:
        doc["budget"] = cfg.partition.budget;
        reach = propagate_greedy_sim_guided(seq, net, initial_box(x0), horizon, cfg.spec,
                                            cfg.partition, policy);
        break;
    }
    timing["propagate_s"] = seconds_since(t0);
    warnings = reach.warnings;
    doc["partitioner"] = strategy_name(cfg.partition.strategy);
    doc["reach"] = steps_json(reach.steps);

    ordered_json tightness = nullptr;
    bool box_initial = std::holds_alternative<LpBall>(x0) && std::get<LpBall>(x0).p == kInf;
    if (box_initial) {
      const auto t1 = Clock::now();
      try {
        const std::vector<Box> mc = mc_reach_estimate(
            seq, net, initial_box(x0), horizon, cfg.partition.mc_samples, cfg.partition.seed);
        const std::vector<double> err = tightness_error(reach, mc);
        tightness = ordered_json(err);
      } catch (const DegenerateMcHull& e) {
        warnings.push_back(std::string("tightness skipped: ") + e.what());
      }
      timing["mc_s"] = seconds_since(t1);
    } else {
      warnings.push_back("tightness skipped: initial set is not a box");
    }
    doc["tightness_error"] = std::move(tightness);

    if (cfg.mode == AnalysisMode::Verify) {
      ReachAvoidSpec property = *cfg.property;
      property.horizon = horizon;
      const auto t2 = Clock::now();
      const Verdict verdict = check_reach_avoid(reach, property, cfg.exact_goal_check);
      timing["check_s"] = seconds_since(t2);
      ordered_json failures = ordered_json::array();
      for (const Failure& f : verdict.failures) {
        failures.push_back({{"timestep", f.timestep},
                            {"kind", f.kind == FailureKind::GoalMiss ? "goal_miss" : "avoid_hit"},
                            {"member", f.member_index}});
      }
      doc["verdict"] = {{"verified", verdict.verified}, {"failures", std::move(failures)}};
      if (require_verified && !verdict.verified) exit_code = 4;
    }
    if (!csv_path.empty()) write_csv(csv_path, reach.steps, cfg.spec.output_shape());
  }

  doc["warnings"] = warnings;
  timing["total_s"] = seconds_since(t_start);
  doc["timing"] = std::move(timing);
  return {std::move(doc), exit_code};
}

}  // namespace clreach
