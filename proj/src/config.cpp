#include "clreach/config.hpp"

#include <fstream>

namespace clreach {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

const json& field(const json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "required field missing");
  return *it;
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "value must be finite");
  return v;
}

Vector get_vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = get_number(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

Matrix get_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) fail(row_path, "ragged or non-array row");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          get_number(j[r][c], row_path + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

// Supports are [lo, hi] pairs per dimension.
std::pair<Vector, Vector> get_support(const json& j, const std::string& path,
                                      Eigen::Index expect) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != expect) {
    fail(path, "expected " + std::to_string(expect) + " [lo, hi] pairs");
  }
  Vector lo(expect), hi(expect);
  for (Eigen::Index i = 0; i < expect; ++i) {
    const json& pair = j[static_cast<std::size_t>(i)];
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!pair.is_array() || pair.size() != 2) fail(p, "expected [lo, hi]");
    lo[i] = get_number(pair[0], p + "[0]");
    hi[i] = get_number(pair[1], p + "[1]");
    if (lo[i] > hi[i]) fail(p, "lo exceeds hi");
  }
  return {std::move(lo), std::move(hi)};
}

LtvSystem parse_system(const json& j, const std::string& path) {
  Matrix A = get_matrix(field(j, path, "A"), path + ".A");
  Matrix B = get_matrix(field(j, path, "B"), path + ".B");
  const Eigen::Index nx = A.rows();
  Matrix C = j.contains("C") ? get_matrix(j["C"], path + ".C") : Matrix(Matrix::Identity(nx, nx));
  Vector c = j.contains("c") ? get_vector(j["c"], path + ".c") : Vector(Vector::Zero(nx));
  Vector olo = Vector::Zero(nx), ohi = Vector::Zero(nx);
  if (j.contains("omega_support")) {
    std::tie(olo, ohi) = get_support(j["omega_support"], path + ".omega_support", nx);
  }
  const Eigen::Index ny = C.cols();
  Vector nlo = Vector::Zero(ny), nhi = Vector::Zero(ny);
  if (j.contains("nu_support")) {
    std::tie(nlo, nhi) = get_support(j["nu_support"], path + ".nu_support", ny);
  }
  std::optional<ControlLimits> limits;
  if (j.contains("u_limits")) {
    auto [ulo, uhi] = get_support(j["u_limits"], path + ".u_limits", B.cols());
    limits = ControlLimits{std::move(ulo), std::move(uhi)};
  }
  try {
    return LtvSystem(std::move(A), std::move(B), std::move(C), std::move(c), std::move(olo),
                     std::move(ohi), std::move(nlo), std::move(nhi), std::move(limits));
  } catch (const DimensionMismatch& e) {
    fail(path, e.what());
  }
}

FeedforwardNetwork parse_network(const json& j, const std::string& path) {
  const json& layers_json = field(j, path, "layers");
  if (!layers_json.is_array() || layers_json.empty()) {
    fail(path + ".layers", "expected a non-empty array");
  }
  std::vector<Layer> layers;
  for (std::size_t l = 0; l < layers_json.size(); ++l) {
    const std::string lp = path + ".layers[" + std::to_string(l) + "]";
    const json& lj = layers_json[l];
    Layer layer;
    layer.W = get_matrix(field(lj, lp, "W"), lp + ".W");
    layer.b = get_vector(field(lj, lp, "b"), lp + ".b");
    const json& act = field(lj, lp, "activation");
    if (!act.is_string()) fail(lp + ".activation", "expected \"relu\" or \"identity\"");
    const std::string name = act.get<std::string>();
    if (name == "relu") {
      layer.activation = Activation::ReLU;
    } else if (name == "identity") {
      layer.activation = Activation::Identity;
    } else {
      fail(lp + ".activation", "unknown activation '" + name + "'");
    }
    layers.push_back(std::move(layer));
  }
  try {
    return FeedforwardNetwork(std::move(layers));
  } catch (const DimensionMismatch& e) {
    fail(path, e.what());
  }
}

InputSet parse_input_set(const json& j, const std::string& path) {
  const json& type = field(j, path, "type");
  const std::string name = type.is_string() ? type.get<std::string>() : "";
  try {
    if (name == "box") {
      return Box(get_vector(field(j, path, "lo"), path + ".lo"),
                 get_vector(field(j, path, "hi"), path + ".hi"))
          .to_ball();
    }
    if (name == "ball") {
      double p = kInf;
      if (j.contains("p")) {
        if (j["p"].is_string() && j["p"].get<std::string>() == "inf") {
          p = kInf;
        } else {
          p = get_number(j["p"], path + ".p");
        }
      }
      return LpBall(get_vector(field(j, path, "center"), path + ".center"),
                    get_vector(field(j, path, "radius"), path + ".radius"), p);
    }
    if (name == "polytope") {
      return HPolytope(get_matrix(field(j, path, "A"), path + ".A"),
                       get_vector(field(j, path, "b"), path + ".b"));
    }
  } catch (const DimensionMismatch& e) {
    fail(path, e.what());
  }
  fail(path + ".type", "expected \"box\", \"ball\", or \"polytope\"");
}

SetMember parse_region(const json& j, const std::string& path) {
  const json& type = field(j, path, "type");
  const std::string name = type.is_string() ? type.get<std::string>() : "";
  try {
    if (name == "box") {
      return Box(get_vector(field(j, path, "lo"), path + ".lo"),
                 get_vector(field(j, path, "hi"), path + ".hi"));
    }
    if (name == "polytope") {
      return HPolytope(get_matrix(field(j, path, "A"), path + ".A"),
                       get_vector(field(j, path, "b"), path + ".b"));
    }
  } catch (const DimensionMismatch& e) {
    fail(path, e.what());
  }
  fail(path + ".type", "expected \"box\" or \"polytope\"");
}

Box parse_box(const json& j, const std::string& path) {
  const SetMember m = parse_region(j, path);
  if (const Box* box = std::get_if<Box>(&m)) return *box;
  fail(path, "expected a box");
}

}  // namespace

AnalysisConfig parse_config(const nlohmann::json& doc) {
  AnalysisConfig cfg;
  const json& system = field(doc, "", "system");
  if (system.is_array()) {
    if (system.empty()) fail("system", "expected at least one block");
    for (std::size_t t = 0; t < system.size(); ++t) {
      cfg.systems.push_back(parse_system(system[t], "system[" + std::to_string(t) + "]"));
    }
    try {
      LtvSequence check(cfg.systems);
    } catch (const DimensionMismatch& e) {
      fail("system", e.what());
    }
  } else {
    cfg.systems.push_back(parse_system(system, "system"));
  }
  cfg.network = parse_network(field(doc, "", "network"), "network");

  const Eigen::Index nx = cfg.systems.front().state_dim();
  const Eigen::Index ny = cfg.systems.front().obs_dim();
  if (cfg.network.input_dim() != ny) {
    fail("network", "input width " + std::to_string(cfg.network.input_dim()) +
                        " does not match observation dimension " + std::to_string(ny));
  }
  if (cfg.network.output_dim() != cfg.systems.front().control_dim()) {
    fail("network", "output width does not match control dimension");
  }

  const json& analysis = field(doc, "", "analysis");
  const json& mode = field(analysis, "analysis", "mode");
  const std::string mode_name = mode.is_string() ? mode.get<std::string>() : "";
  if (mode_name == "forward") {
    cfg.mode = AnalysisMode::Forward;
  } else if (mode_name == "backward") {
    cfg.mode = AnalysisMode::Backward;
  } else if (mode_name == "verify") {
    cfg.mode = AnalysisMode::Verify;
  } else {
    fail("analysis.mode", "expected \"forward\", \"backward\", or \"verify\"");
  }

  const json& set = field(doc, "", "set");
  if (cfg.mode == AnalysisMode::Backward) {
    cfg.target = parse_box(set, "set");
    if (cfg.target->dim() != nx) fail("set", "target dimension does not match the state");
  } else {
    cfg.initial = parse_input_set(set, "set");
    const Eigen::Index dim =
        std::visit([](const auto& s) { return s.dim(); }, *cfg.initial);
    if (dim != nx) fail("set", "initial-set dimension does not match the state");
  }

  if (analysis.contains("horizon")) {
    const double h = get_number(analysis["horizon"], "analysis.horizon");
    if (h < 1 || h != std::floor(h)) fail("analysis.horizon", "expected a positive integer");
    cfg.horizon = static_cast<std::size_t>(h);
  }
  if (analysis.contains("seed")) {
    const double s = get_number(analysis["seed"], "analysis.seed");
    if (s < 0 || s != std::floor(s)) fail("analysis.seed", "expected a non-negative integer");
    cfg.partition.seed = static_cast<std::uint64_t>(s);
  }
  if (analysis.contains("solver")) {
    const std::string solver = analysis["solver"].is_string()
                                   ? analysis["solver"].get<std::string>()
                                   : "";
    if (solver == "closed-form") {
      cfg.spec.solver = FacetSolver::ClosedForm;
    } else if (solver == "lp") {
      cfg.spec.solver = FacetSolver::LP;
    } else {
      fail("analysis.solver", "expected \"closed-form\" or \"lp\"");
    }
  }
  if (analysis.contains("facets") && !analysis["facets"].is_null()) {
    const json& facets = analysis["facets"];
    if (facets.is_string()) {
      if (facets.get<std::string>() != "identity") {
        fail("analysis.facets", "expected \"identity\" or an array of direction rows");
      }
    } else {
      Matrix F = get_matrix(facets, "analysis.facets");
      if (F.cols() != nx) fail("analysis.facets", "direction rows must match the state dimension");
      cfg.spec.facets = std::move(F);
    }
  }
  if (analysis.contains("partitioner")) {
    const json& part = analysis["partitioner"];
    const std::string pp = "analysis.partitioner";
    if (part.contains("strategy")) {
      const std::string s =
          part["strategy"].is_string() ? part["strategy"].get<std::string>() : "";
      if (s == "none") {
        cfg.partition.strategy = PartitionStrategy::None;
      } else if (s == "uniform") {
        cfg.partition.strategy = PartitionStrategy::Uniform;
      } else if (s == "greedy") {
        cfg.partition.strategy = PartitionStrategy::GreedySimGuided;
      } else {
        fail(pp + ".strategy", "expected \"none\", \"uniform\", or \"greedy\"");
      }
    }
    if (part.contains("cells")) {
      const json& cells = part["cells"];
      if (!cells.is_array() || cells.empty()) fail(pp + ".cells", "expected an array of counts");
      cfg.partition.r.clear();
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const double v = get_number(cells[i], pp + ".cells[" + std::to_string(i) + "]");
        if (v < 1 || v != std::floor(v)) {
          fail(pp + ".cells[" + std::to_string(i) + "]", "expected a positive integer");
        }
        cfg.partition.r.push_back(static_cast<int>(v));
      }
    }
    if (part.contains("budget")) {
      const double v = get_number(part["budget"], pp + ".budget");
      if (v < 1 || v != std::floor(v)) fail(pp + ".budget", "expected a positive integer");
      cfg.partition.budget = static_cast<int>(v);
    }
    if (part.contains("mc_samples")) {
      const double v = get_number(part["mc_samples"], pp + ".mc_samples");
      if (v < 2 || v != std::floor(v)) fail(pp + ".mc_samples", "expected an integer >= 2");
      cfg.partition.mc_samples = static_cast<int>(v);
    }
  }
  if (analysis.contains("exact_goal_check")) {
    if (!analysis["exact_goal_check"].is_boolean()) {
      fail("analysis.exact_goal_check", "expected a boolean");
    }
    cfg.exact_goal_check = analysis["exact_goal_check"].get<bool>();
  }
  if (cfg.mode == AnalysisMode::Verify) {
    ReachAvoidSpec property;
    property.goal = parse_region(field(analysis, "analysis", "goal"), "analysis.goal");
    const Eigen::Index gdim =
        std::visit([](const auto& s) { return s.dim(); }, property.goal);
    if (gdim != nx) fail("analysis.goal", "goal dimension does not match the state");
    if (analysis.contains("avoid")) {
      const json& avoid = analysis["avoid"];
      if (!avoid.is_array()) fail("analysis.avoid", "expected an array of regions");
      std::vector<SetMember> sets;
      for (std::size_t i = 0; i < avoid.size(); ++i) {
        sets.push_back(parse_region(avoid[i], "analysis.avoid[" + std::to_string(i) + "]"));
        const Eigen::Index adim =
            std::visit([](const auto& s) { return s.dim(); }, sets.back());
        if (adim != nx) {
          fail("analysis.avoid[" + std::to_string(i) + "]",
               "avoid-set dimension does not match the state");
        }
      }
      if (!sets.empty()) property.avoid.push_back(std::move(sets));
    }
    cfg.property = std::move(property);
  }
  return cfg;
}

AnalysisConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

Matrix load_facets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open facet file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("facet file '" + path + "' is not valid JSON: " + e.what());
  }
  return get_matrix(doc, "facets");
}

}  // namespace clreach
