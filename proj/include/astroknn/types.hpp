#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "astroknn/geometry.hpp"

namespace astroknn {

using Label = std::uint8_t;
using Labels = std::vector<Label>;

/// One observation: a target per astrobot (ordered by id) and, once
/// simulated or executed, the per-astrobot convergence bits.
struct Configuration {
  std::vector<Vec2> targets;
  std::optional<Labels> ground_truth;

  std::size_t population() const { return targets.size(); }
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

enum class PriorityRule { random_fixed, farthest_first };

std::string_view to_string(PriorityRule rule);
PriorityRule priority_rule_from_string(std::string_view name);

struct SimParams {
  double omega_max = 0.05;     // rad per tick
  double eps_safety = 1.0;     // mm, chain-to-chain clearance
  double tol_converge = 0.05;  // mm
  int max_ticks = 500;
  int deadlock_window = 20;
  PriorityRule priority_rule = PriorityRule::random_fixed;

  void validate() const;
  friend bool operator==(const SimParams&, const SimParams&) = default;
};

/// Labeled configurations over a single layout.
struct Dataset {
  std::string layout_fingerprint;
  SimParams sim_params;
  std::uint64_t seed = 0;
  std::size_t population = 0;
  std::vector<Configuration> configurations;

  std::size_t size() const { return configurations.size(); }
  /// Throws unless every configuration has `population` targets and labels.
  void validate() const;
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

enum class Exec { serial, parallel };

}  // namespace astroknn
