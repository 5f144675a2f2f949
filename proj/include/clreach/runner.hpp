#pragma once

#include "clreach/config.hpp"

namespace clreach {

struct RunResult {
  nlohmann::ordered_json document;
  int exit_code = 0;
};

// Dispatches the configured analysis, collects sets/metrics/warnings into a
// result document, and optionally writes a plot-ready CSV.
RunResult run_analysis(const AnalysisConfig& cfg, bool require_verified = false,
                       const std::string& csv_path = "");

}  // namespace clreach
