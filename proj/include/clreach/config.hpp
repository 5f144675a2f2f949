#pragma once

#include <json.hpp>

#include "clreach/backward.hpp"
#include "clreach/partition.hpp"
#include "clreach/verify.hpp"

namespace clreach {

enum class AnalysisMode { Forward, Backward, Verify };

// Parsed and dimension-checked run description. Top-level JSON keys:
// "system" (single block or array), "network", "set", "analysis".
struct AnalysisConfig {
  std::vector<LtvSystem> systems;
  FeedforwardNetwork network;
  std::optional<InputSet> initial;  // forward / verify
  std::optional<Box> target;        // backward
  AnalysisMode mode = AnalysisMode::Forward;
  std::optional<std::size_t> horizon;
  PartitionConfig partition;
  ReachSpec spec;
  std::optional<ReachAvoidSpec> property;
  bool exact_goal_check = false;
  int jobs = 1;

  LtvSequence sequence() const { return LtvSequence(systems); }
};

AnalysisConfig parse_config(const nlohmann::json& doc);
AnalysisConfig load_config(const std::string& path);

// Facet-direction file: a JSON array of direction rows.
Matrix load_facets(const std::string& path);

}  // namespace clreach
