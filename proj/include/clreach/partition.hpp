#pragma once

#include "clreach/forward.hpp"

namespace clreach {

enum class PartitionStrategy { None, Uniform, GreedySimGuided };

struct PartitionConfig {
  PartitionStrategy strategy = PartitionStrategy::None;
  std::vector<int> r;            // per-dimension cell counts (Uniform)
  int budget = 1;                // max propagator calls (GreedySimGuided)
  int mc_samples = 1000;
  std::uint64_t seed = 0;
};

std::vector<Box> uniform_partition(const Box& set, const std::vector<int>& r);

ReachSequence propagate_uniform(const LtvSequence& seq, const FeedforwardNetwork& net,
                                const Box& x0, std::size_t horizon, const ReachSpec& spec,
                                const PartitionConfig& config, const SlopePolicy& policy = {},
                                int jobs = 1);

// Per-timestep axis-aligned hulls of noise-free closed-loop rollouts from
// uniform samples of x0; an under-estimate of the reachable sets.
std::vector<Box> mc_reach_estimate(const LtvSequence& seq, const FeedforwardNetwork& net,
                                   const Box& x0, std::size_t horizon, int samples,
                                   std::uint64_t seed);

ReachSequence propagate_greedy_sim_guided(const LtvSequence& seq, const FeedforwardNetwork& net,
                                          const Box& x0, std::size_t horizon,
                                          const ReachSpec& spec, const PartitionConfig& config,
                                          const SlopePolicy& policy = {});

}  // namespace clreach
