#include "clreach/verify.hpp"

namespace clreach {

const std::vector<SetMember>* ReachAvoidSpec::avoid_at(std::size_t t) const {
  if (avoid.empty()) return nullptr;
  if (avoid.size() == 1) return &avoid.front();
  if (t < avoid.size()) return &avoid[t];
  return nullptr;
}

namespace {

bool goal_contains(const SetMember& member, const SetMember& goal, bool exact_polytope_goal) {
  const HPolytope* member_poly = std::get_if<HPolytope>(&member);
  const HPolytope* goal_poly = std::get_if<HPolytope>(&goal);
  if (exact_polytope_goal && member_poly != nullptr && goal_poly != nullptr) {
    for (Eigen::Index i = 0; i < goal_poly->A.rows(); ++i) {
      if (support_value(goal_poly->A.row(i).transpose(), *member_poly) >
          goal_poly->b[i] + 1e-9) {
        return false;
      }
    }
    return true;
  }
  const Box hull = box_hull(member);
  return std::visit([&](const auto& g) { return check_containment(hull, g); }, goal);
}

bool hits_avoid(const SetMember& member, const SetMember& avoid) {
  const Box hull = box_hull(member);
  return !std::visit([&](const auto& a) { return check_disjoint(hull, a); }, avoid);
}

}  // namespace

Verdict check_reach_avoid(const ReachSequence& reach, const ReachAvoidSpec& spec,
                          bool exact_polytope_goal) {
  if (reach.horizon() != spec.horizon) {
    throw HorizonMismatch("check_reach_avoid: reach sequence horizon differs from the property");
  }
  Verdict verdict;
  const SetUnion& final_union = reach.steps.back();
  for (std::size_t i = 0; i < final_union.members.size(); ++i) {
    if (!goal_contains(final_union.members[i], spec.goal, exact_polytope_goal)) {
      verdict.failures.push_back({spec.horizon, FailureKind::GoalMiss, i});
    }
  }
  for (std::size_t t = 0; t < reach.steps.size(); ++t) {
    const std::vector<SetMember>* avoid = spec.avoid_at(t);
    if (avoid == nullptr) continue;
    for (std::size_t i = 0; i < reach.steps[t].members.size(); ++i) {
      for (const SetMember& a : *avoid) {
        if (hits_avoid(reach.steps[t].members[i], a)) {
          verdict.failures.push_back({t, FailureKind::AvoidHit, i});
          break;
        }
      }
    }
  }
  verdict.verified = verdict.failures.empty();
  return verdict;
}

std::vector<double> tightness_error(const ReachSequence& reach, const std::vector<Box>& mc) {
  if (reach.steps.size() != mc.size()) {
    throw HorizonMismatch("tightness_error: sampled hull count differs from reach sequence");
  }
  std::vector<double> err;
  err.reserve(reach.steps.size());
  for (std::size_t t = 0; t < reach.steps.size(); ++t) {
    const double mc_vol = mc[t].volume();
    if (mc_vol <= 0.0) {
      throw DegenerateMcHull("tightness_error: sampled hull has zero volume at step " +
                             std::to_string(t));
    }
    err.push_back(box_hull(reach.steps[t]).volume() / mc_vol - 1.0);
  }
  return err;
}

}  // namespace clreach
