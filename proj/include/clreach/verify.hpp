#pragma once

#include "clreach/forward.hpp"

namespace clreach {

struct HorizonMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DegenerateMcHull : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Goal at the final step plus avoid sets per timestep. A single avoid list
// broadcasts to every timestep; an empty outer list means no avoid sets.
struct ReachAvoidSpec {
  SetMember goal;
  std::vector<std::vector<SetMember>> avoid;
  std::size_t horizon = 0;

  const std::vector<SetMember>* avoid_at(std::size_t t) const;
};

enum class FailureKind { GoalMiss, AvoidHit };

struct Failure {
  std::size_t timestep;
  FailureKind kind;
  std::size_t member_index;
};

struct Verdict {
  bool verified = false;
  std::vector<Failure> failures;
};

// Conservative reach-avoid check: verified only if every final member sits in
// the goal and every member at every step misses every avoid set. Goal
// containment uses member box hulls; exact_polytope_goal switches polytope
// members to per-facet support LPs against a polytope goal.
Verdict check_reach_avoid(const ReachSequence& reach, const ReachAvoidSpec& spec,
                          bool exact_polytope_goal = false);

// Per-timestep hypervolume ratio of the reach hull to the sampled hull,
// minus one; zero means no conservatism measurable by sampling.
std::vector<double> tightness_error(const ReachSequence& reach, const std::vector<Box>& mc);

}  // namespace clreach
