#include "clreach/fixtures.hpp"

#include <cmath>
#include <fstream>

#include "clreach/random.hpp"

namespace clreach {

namespace {

using nlohmann::ordered_json;

ordered_json random_layers(Rng& rng, const std::vector<int>& widths, double bias_range) {
  ordered_json layers = ordered_json::array();
  for (std::size_t l = 1; l < widths.size(); ++l) {
    const int fan_in = widths[l - 1];
    const int fan_out = widths[l];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    ordered_json W = ordered_json::array();
    for (int r = 0; r < fan_out; ++r) {
      ordered_json row = ordered_json::array();
      for (int c = 0; c < fan_in; ++c) row.push_back(rng.uniform(-limit, limit));
      W.push_back(std::move(row));
    }
    ordered_json b = ordered_json::array();
    for (int r = 0; r < fan_out; ++r) b.push_back(rng.uniform(-bias_range, bias_range));
    layers.push_back({{"W", std::move(W)},
                      {"b", std::move(b)},
                      {"activation", l + 1 < widths.size() ? "relu" : "identity"}});
  }
  return layers;
}

ordered_json support(double lo, double hi, int dims) {
  ordered_json out = ordered_json::array();
  for (int i = 0; i < dims; ++i) out.push_back({lo, hi});
  return out;
}

ordered_json double_integrator(std::uint64_t seed) {
  Rng rng(seed);
  ordered_json doc;
  doc["system"] = {{"A", {{1.0, 1.0}, {0.0, 1.0}}},
                   {"B", {{0.5}, {1.0}}},
                   {"C", {{1.0, 0.0}, {0.0, 1.0}}},
                   {"c", {0.0, 0.0}}};
  doc["network"] = {{"layers", random_layers(rng, {2, 5, 5, 1}, 0.5)}};
  doc["set"] = {{"type", "box"}, {"lo", {2.5, -0.25}}, {"hi", {3.0, 0.25}}};
  doc["analysis"] = {{"mode", "forward"},
                     {"horizon", 5},
                     {"solver", "closed-form"},
                     {"facets", "identity"},
                     {"seed", seed},
                     {"partitioner",
                      {{"strategy", "none"}, {"cells", {4, 4}}, {"mc_samples", 1000}}}};
  return doc;
}

ordered_json quadrotor_6d(std::uint64_t seed) {
  Rng rng(seed);
  const double g = 9.8;
  const double ts = 0.1;
  ordered_json A = ordered_json::array();
  for (int r = 0; r < 6; ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < 6; ++c) {
      double v = (r == c) ? 1.0 : 0.0;
      if (c == r + 3) v = ts;
      row.push_back(v);
    }
    A.push_back(std::move(row));
  }
  ordered_json B = ordered_json::array();
  for (int r = 0; r < 6; ++r) {
    ordered_json row = {0.0, 0.0, 0.0};
    if (r == 3) row = {ts * g, 0.0, 0.0};
    if (r == 4) row = {0.0, -ts * g, 0.0};
    if (r == 5) row = {0.0, 0.0, ts};
    B.push_back(std::move(row));
  }
  ordered_json doc;
  doc["system"] = {{"A", std::move(A)},
                   {"B", std::move(B)},
                   {"c", {0.0, 0.0, 0.0, 0.0, 0.0, -ts * g}},
                   {"omega_support", support(-0.005, 0.005, 6)},
                   {"nu_support", support(-0.001, 0.001, 6)}};
  doc["network"] = {{"layers", random_layers(rng, {6, 32, 32, 3}, 0.1)}};
  doc["set"] = {{"type", "box"},
                {"lo", {4.65, 4.65, 2.95, 0.94, -0.05, -0.05}},
                {"hi", {4.75, 4.75, 3.05, 0.96, 0.05, 0.05}}};
  doc["analysis"] = {{"mode", "forward"},
                     {"horizon", 12},
                     {"solver", "closed-form"},
                     {"facets", "identity"},
                     {"seed", seed},
                     {"partitioner",
                      {{"strategy", "none"}, {"cells", {2, 2, 1, 1, 1, 1}}, {"mc_samples", 1000}}}};
  return doc;
}

}  // namespace

ordered_json make_fixture(const std::string& name, std::uint64_t seed) {
  if (name == "double_integrator") return double_integrator(seed);
  if (name == "quadrotor_6d") return quadrotor_6d(seed);
  throw UnknownFixture("unknown fixture '" + name +
                       "'; available: double_integrator, quadrotor_6d");
}

void emit_fixture(const std::string& name, const std::string& out_path, std::uint64_t seed) {
  const ordered_json doc = make_fixture(name, seed);
  std::ofstream out(out_path);
  if (!out) throw ConfigError("cannot write fixture to '" + out_path + "'");
  out << doc.dump(2) << "\n";
}

}  // namespace clreach
