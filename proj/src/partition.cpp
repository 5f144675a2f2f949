#include "clreach/partition.hpp"

#include <algorithm>
#include <thread>

namespace clreach {

namespace {

void merge_warning(std::vector<std::string>& into, const std::string& w) {
  if (std::find(into.begin(), into.end(), w) == into.end()) into.push_back(w);
}

void merge_warnings(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const std::string& w : from) merge_warning(into, w);
}

LtvSequence collapse_noise(const LtvSequence& seq) {
  std::vector<LtvSystem> systems = seq.systems;
  for (LtvSystem& sys : systems) {
    const Vector omid = 0.5 * (sys.omega_lo + sys.omega_hi);
    const Vector nmid = 0.5 * (sys.nu_lo + sys.nu_hi);
    sys.omega_lo = omid;
    sys.omega_hi = omid;
    sys.nu_lo = nmid;
    sys.nu_hi = nmid;
  }
  return LtvSequence(std::move(systems));
}

}  // namespace

std::vector<Box> uniform_partition(const Box& set, const std::vector<int>& r) {
  const Eigen::Index n = set.dim();
  require(static_cast<Eigen::Index>(r.size()) == n, "uniform_partition: cell counts per dimension");
  for (int rk : r) require(rk >= 1, "uniform_partition: cell counts must be >= 1");

  // Breakpoint k/r_d interpolated between lo and hi so the outer edges are
  // exact and the union tiles the box.
  const auto edge = [&](Eigen::Index d, int k) {
    const double t = static_cast<double>(k) / r[static_cast<std::size_t>(d)];
    return set.lo[d] * (1.0 - t) + set.hi[d] * t;
  };

  std::size_t count = 1;
  for (int rk : r) count *= static_cast<std::size_t>(rk);
  std::vector<Box> cells;
  cells.reserve(count);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (std::size_t cell = 0; cell < count; ++cell) {
    Vector lo(n), hi(n);
    for (Eigen::Index d = 0; d < n; ++d) {
      lo[d] = edge(d, idx[static_cast<std::size_t>(d)]);
      hi[d] = edge(d, idx[static_cast<std::size_t>(d)] + 1);
    }
    cells.emplace_back(std::move(lo), std::move(hi));
    for (Eigen::Index d = n - 1; d >= 0; --d) {
      if (++idx[static_cast<std::size_t>(d)] < r[static_cast<std::size_t>(d)]) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }
  return cells;
}

ReachSequence propagate_uniform(const LtvSequence& seq, const FeedforwardNetwork& net,
                                const Box& x0, std::size_t horizon, const ReachSpec& spec,
                                const PartitionConfig& config, const SlopePolicy& policy,
                                int jobs) {
  const std::vector<Box> cells = uniform_partition(x0, config.r);
  std::vector<ReachSequence> per_cell(cells.size());

  const auto worker = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      per_cell[i] = propagate(seq, net, cells[i].to_ball(), horizon, spec, policy);
    }
  };

  const int n_jobs = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
  if (n_jobs == 1) {
    worker(0, cells.size());
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_jobs));
    const std::size_t chunk = (cells.size() + n_jobs - 1) / n_jobs;
    for (int j = 0; j < n_jobs; ++j) {
      const std::size_t lo = static_cast<std::size_t>(j) * chunk;
      const std::size_t hi = std::min(cells.size(), lo + chunk);
      pool.emplace_back([&, j, lo, hi] {
        try {
          worker(lo, hi);
        } catch (...) {
          errors[static_cast<std::size_t>(j)] = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  ReachSequence out;
  out.steps.resize(horizon + 1);
  out.steps[0].members.emplace_back(x0);
  for (const ReachSequence& cell_seq : per_cell) {
    for (std::size_t t = 1; t <= horizon; ++t) {
      out.steps[t].members.insert(out.steps[t].members.end(), cell_seq.steps[t].members.begin(),
                                  cell_seq.steps[t].members.end());
    }
    merge_warnings(out.warnings, cell_seq.warnings);
  }
  return out;
}

std::vector<Box> mc_reach_estimate(const LtvSequence& seq, const FeedforwardNetwork& net,
                                   const Box& x0, std::size_t horizon, int samples,
                                   std::uint64_t seed) {
  require(samples >= 2, "mc_reach_estimate: need at least two samples");
  const LtvSequence guide = collapse_noise(seq);
  Rng rng(seed);
  std::vector<Box> hulls;
  hulls.reserve(horizon + 1);
  std::vector<Vector> lo(horizon + 1), hi(horizon + 1);
  for (int i = 0; i < samples; ++i) {
    const Vector xs = rng.uniform_vector(x0.lo, x0.hi);
    const std::uint64_t roll_seed = rng.raw();
    const std::vector<Vector> traj = simulate_rollout(guide, net, xs, horizon, roll_seed);
    for (std::size_t t = 0; t <= horizon; ++t) {
      if (i == 0) {
        lo[t] = traj[t];
        hi[t] = traj[t];
      } else {
        lo[t] = lo[t].cwiseMin(traj[t]);
        hi[t] = hi[t].cwiseMax(traj[t]);
      }
    }
  }
  for (std::size_t t = 0; t <= horizon; ++t) hulls.emplace_back(lo[t], hi[t]);
  return hulls;
}

namespace {

struct GreedyElement {
  Box cell;
  ReachSequence reach;
  std::vector<Box> hulls;  // per-timestep box hulls of reach
};

GreedyElement make_element(const LtvSequence& seq, const FeedforwardNetwork& net, const Box& cell,
                           std::size_t horizon, const ReachSpec& spec, const SlopePolicy& policy) {
  GreedyElement el;
  el.cell = cell;
  el.reach = propagate(seq, net, cell.to_ball(), horizon, spec, policy);
  el.hulls.reserve(horizon + 1);
  for (const SetUnion& s : el.reach.steps) el.hulls.push_back(box_hull(s));
  return el;
}

// Guidance distance: one-sided overshoot of the element's final reach box
// beyond the sampled hull, upper and lower sides summed.
double guidance_distance(const GreedyElement& el, const Box& mc_final) {
  const Box& last = el.hulls.back();
  const double over_hi = (last.hi - mc_final.hi).cwiseMax(0.0).maxCoeff();
  const double over_lo = (mc_final.lo - last.lo).cwiseMax(0.0).maxCoeff();
  return over_hi + over_lo;
}

}  // namespace

ReachSequence propagate_greedy_sim_guided(const LtvSequence& seq, const FeedforwardNetwork& net,
                                          const Box& x0, std::size_t horizon,
                                          const ReachSpec& spec, const PartitionConfig& config,
                                          const SlopePolicy& policy) {
  require(config.budget >= 1, "greedy partitioner: budget must be >= 1");
  const std::vector<Box> mc =
      mc_reach_estimate(seq, net, x0, horizon, config.mc_samples, config.seed);

  std::vector<GreedyElement> stack;
  std::vector<GreedyElement> retired;
  stack.push_back(make_element(seq, net, x0, horizon, spec, policy));
  int calls = 1;

  while (!stack.empty() && calls < config.budget) {
    std::size_t pick = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < stack.size(); ++i) {
      const double d = guidance_distance(stack[i], mc[horizon]);
      if (d > best) {
        best = d;
        pick = i;
      }
    }
    GreedyElement el = std::move(stack[pick]);
    stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(pick));

    bool inside = true;
    for (std::size_t t = 1; t <= horizon && inside; ++t) {
      inside = check_containment(el.hulls[t], mc[t], 1e-9);
    }
    if (inside) {
      retired.push_back(std::move(el));
      continue;
    }

    Eigen::Index split = 0;
    (el.cell.hi - el.cell.lo).maxCoeff(&split);
    const double mid = 0.5 * (el.cell.lo[split] + el.cell.hi[split]);
    Box left = el.cell;
    Box right = el.cell;
    left.hi[split] = mid;
    right.lo[split] = mid;
    stack.push_back(make_element(seq, net, left, horizon, spec, policy));
    stack.push_back(make_element(seq, net, right, horizon, spec, policy));
    calls += 2;
  }

  ReachSequence out;
  out.steps.resize(horizon + 1);
  out.steps[0].members.emplace_back(x0);
  const auto fold = [&](const GreedyElement& el) {
    for (std::size_t t = 1; t <= horizon; ++t) {
      out.steps[t].members.insert(out.steps[t].members.end(), el.reach.steps[t].members.begin(),
                                  el.reach.steps[t].members.end());
    }
    merge_warnings(out.warnings, el.reach.warnings);
  };
  for (const GreedyElement& el : retired) fold(el);
  for (const GreedyElement& el : stack) fold(el);
  return out;
}

}  // namespace clreach
