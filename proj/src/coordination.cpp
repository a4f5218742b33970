#include "astroknn/coordination.hpp"

#include <algorithm>
#include <exception>
#include <numeric>

#include "astroknn/layout_io.hpp"

namespace astroknn {

namespace {

constexpr int kMaxResamples = 100;
constexpr int kMaxReseeds = 10;

struct Box {
  double x0, y0, x1, y1;
};

Box bounds(const ArmChain& c) {
  Box b{c[0].x, c[0].y, c[0].x, c[0].y};
  for (const auto& p : c) {
    b.x0 = std::min(b.x0, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.x1 = std::max(b.x1, p.x);
    b.y1 = std::max(b.y1, p.y);
  }
  return b;
}

// Gap between boxes along the axes; a lower bound on the chain distance.
double box_gap(const Box& a, const Box& b) {
  const double gx = std::max({0.0, a.x0 - b.x1, b.x0 - a.x1});
  const double gy = std::max({0.0, a.y0 - b.y1, b.y0 - a.y1});
  return std::max(gx, gy);
}

std::vector<int> priority_order(const SwarmLayout& layout, const Configuration& config,
                                const SimParams& params, Rng& rng) {
  const int n = static_cast<int>(layout.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  switch (params.priority_rule) {
    case PriorityRule::random_fixed:
      for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(i) + 1));
        std::swap(order[i], order[j]);
      }
      break;
    case PriorityRule::farthest_first: {
      std::vector<double> dist(n);
      for (int i = 0; i < n; ++i) {
        const auto& spec = layout.astrobot(i);
        dist[i] = norm(config.targets[i] - arm_chain(spec, ArmPose::folded())[2]);
      }
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] > dist[b]; });
      break;
    }
  }
  return order;
}

}  // namespace

Configuration assign_targets(const SwarmLayout& layout, Rng& rng, double min_target_sep) {
  if (!(min_target_sep >= 0.0)) throw Error("min_target_sep must be non-negative");
  const int n = static_cast<int>(layout.size());
  Configuration cfg;
  cfg.targets.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& spec = layout.astrobot(i);
    bool placed = false;
    for (int attempt = 0; attempt < kMaxResamples && !placed; ++attempt) {
      const Vec2 t = sample_target(spec, rng);
      placed = std::none_of(layout.neighbors(i).begin(), layout.neighbors(i).end(), [&](int j) {
        return j < i && norm(t - cfg.targets[j]) < min_target_sep;
      });
      if (placed) cfg.targets[i] = t;
    }
    if (!placed) throw Error("unassignable configuration");
  }
  return cfg;
}

Labels simulate(const SwarmLayout& layout, const Configuration& config, const SimParams& params, Rng& rng,
                const TickObserver& observer) {
  params.validate();
  const int n = static_cast<int>(layout.size());
  if (config.targets.size() != layout.size()) throw Error("simulate: configuration population mismatch");

  std::vector<ArmPose> pose(n, ArmPose::folded());
  std::vector<ArmPose> goal(n);
  std::vector<ArmChain> chain(n);
  std::vector<Box> box(n);
  Labels converged(n, 0);
  for (int i = 0; i < n; ++i) {
    const auto& spec = layout.astrobot(i);
    goal[i] = inverse_kinematics(spec, config.targets[i]);
    chain[i] = arm_chain(spec, pose[i]);
    box[i] = bounds(chain[i]);
  }
  auto at_target = [&](int i) { return norm(chain[i][2] - config.targets[i]) <= params.tol_converge; };
  for (int i = 0; i < n; ++i) converged[i] = at_target(i) ? 1 : 0;

  const std::vector<int> order = priority_order(layout, config, params, rng);
  int idle = 0;
  int remaining = static_cast<int>(std::count(converged.begin(), converged.end(), Label{0}));
  for (int tick = 1; tick <= params.max_ticks && remaining > 0; ++tick) {
    bool moved = false;
    for (int i : order) {
      if (converged[i]) continue;
      const double dt = goal[i].theta - pose[i].theta;
      const double dp = goal[i].phi - pose[i].phi;
      const double span = std::max(std::abs(dt), std::abs(dp));
      ArmPose next = goal[i];
      if (span > params.omega_max) {
        const double s = params.omega_max / span;
        next = {pose[i].theta + s * dt, pose[i].phi + s * dp};
      }
      const auto& spec = layout.astrobot(i);
      const ArmChain proposal = arm_chain(spec, next);
      const Box pbox = bounds(proposal);
      bool clear = true;
      for (int j : layout.neighbors(i)) {
        if (box_gap(pbox, box[j]) >= params.eps_safety) continue;
        if (min_chain_distance(proposal, chain[j]) < params.eps_safety) {
          clear = false;
          break;
        }
      }
      if (!clear) continue;
      pose[i] = next;
      chain[i] = proposal;
      box[i] = pbox;
      moved = true;
      if (at_target(i)) {
        converged[i] = 1;
        --remaining;
      }
    }
    if (observer) observer(tick, chain, converged);
    idle = moved ? 0 : idle + 1;
    if (idle >= params.deadlock_window) break;
  }
  return converged;
}

Dataset generate_dataset(const SwarmLayout& layout, std::size_t count, const SimParams& params,
                         std::uint64_t seed, std::optional<double> min_target_sep, Exec exec) {
  if (count < 1) throw Error("generate_dataset: count must be at least 1");
  params.validate();
  const double sep = min_target_sep.value_or(params.eps_safety);

  Dataset ds;
  ds.layout_fingerprint = layout_fingerprint(layout);
  ds.sim_params = params;
  ds.seed = seed;
  ds.population = layout.size();
  ds.configurations.resize(count);
  std::vector<std::exception_ptr> errors(count);

  auto one = [&](std::size_t index) {
    const std::uint64_t base = mix_seed(seed ^ static_cast<std::uint64_t>(index));
    for (int attempt = 0;; ++attempt) {
      Rng rng(mix_seed(base + static_cast<std::uint64_t>(attempt)));
      try {
        Configuration cfg = assign_targets(layout, rng, sep);
        cfg.ground_truth = simulate(layout, cfg, params, rng);
        ds.configurations[index] = std::move(cfg);
        return;
      } catch (const Error&) {
        if (attempt + 1 >= kMaxReseeds) throw;
      }
    }
  };

  const auto total = static_cast<std::ptrdiff_t>(count);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t c = 0; c < total; ++c) {
      try {
        one(static_cast<std::size_t>(c));
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  } else {
    for (std::ptrdiff_t c = 0; c < total; ++c) {
      try {
        one(static_cast<std::size_t>(c));
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return ds;
}

double mean_convergence_rate(const Dataset& ds) {
  std::size_t ones = 0;
  std::size_t total = 0;
  for (const auto& c : ds.configurations) {
    if (!c.ground_truth) continue;
    ones += static_cast<std::size_t>(std::count(c.ground_truth->begin(), c.ground_truth->end(), Label{1}));
    total += c.ground_truth->size();
  }
  return total == 0 ? 0.0 : static_cast<double>(ones) / static_cast<double>(total);
}

}  // namespace astroknn
