#pragma once

#include "clreach/forward.hpp"
#include "clreach/partition.hpp"

namespace clreach {

struct MissingControlLimits : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EmptyUnion : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// steps[0] is the target; steps[k] under-approximates the states steered
// into the previous step's hull in one move. backreachable[k-1] is the
// controller-agnostic box searched for step k.
struct BackprojectionResult {
  std::vector<SetUnion> steps;
  std::vector<Box> backreachable;
  std::vector<std::string> warnings;
};

// Controller-agnostic bounds: per state dimension, extremes of x over
// {(x, u) : A·x + B·u + c ∈ next_set, u ∈ u_set}.
Box backreachable_box(const LtvSystem& sys, const SetMember& next_set, const Box& u_set);

// States in `cell` that every control permitted by the envelope maps into
// next_box. Emptiness is a legitimate outcome.
HPolytope backprojection_polytope(const LtvSystem& sys, const AffineEnvelope& env,
                                  const Box& next_box, const Box& cell);

BackprojectionResult estimate_backprojection(const LtvSystem& sys, const FeedforwardNetwork& net,
                                             const Box& target, std::size_t horizon,
                                             const std::vector<int>& r,
                                             const SlopePolicy& policy = {});

// Samples the deepest backprojection union, steps each point once through the
// exact closed loop, and returns the fraction landing in `target`.
double backprojection_coverage(const BackprojectionResult& result, const LtvSystem& sys,
                               const FeedforwardNetwork& net, const Box& target, int samples,
                               std::uint64_t seed, std::vector<std::string>* warnings = nullptr);

}  // namespace clreach
