#pragma once

#include <json.hpp>

#include "clreach/common.hpp"

namespace clreach {

struct UnknownFixture : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Benchmark configs with explicitly declared seeded random networks:
// "double_integrator" (2 states, 1 control, noise-free, 5 steps) and
// "quadrotor_6d" (Euler-discretized, bounded noises, 12 steps).
nlohmann::ordered_json make_fixture(const std::string& name, std::uint64_t seed = 0);

void emit_fixture(const std::string& name, const std::string& out_path, std::uint64_t seed = 0);

}  // namespace clreach
