#include "astroknn/types.hpp"

#include <string>

namespace astroknn {

std::string_view to_string(PriorityRule rule) {
  switch (rule) {
    case PriorityRule::random_fixed:
      return "random_fixed";
    case PriorityRule::farthest_first:
      return "farthest_first";
  }
  return "unknown";
}

PriorityRule priority_rule_from_string(std::string_view name) {
  if (name == "random_fixed") return PriorityRule::random_fixed;
  if (name == "farthest_first") return PriorityRule::farthest_first;
  throw Error("unknown priority rule '" + std::string(name) + "'");
}

void SimParams::validate() const {
  if (!(omega_max > 0.0)) throw Error("sim params: omega_max must be positive");
  if (!(eps_safety > 0.0)) throw Error("sim params: eps_safety must be positive");
  if (!(tol_converge > 0.0)) throw Error("sim params: tol_converge must be positive");
  if (max_ticks <= 0) throw Error("sim params: max_ticks must be positive");
  if (deadlock_window <= 0) throw Error("sim params: deadlock_window must be positive");
  if (deadlock_window >= max_ticks) throw Error("sim params: deadlock_window must be below max_ticks");
}

void Dataset::validate() const {
  for (std::size_t i = 0; i < configurations.size(); ++i) {
    const auto& c = configurations[i];
    if (c.targets.size() != population)
      throw Error("dataset: configuration " + std::to_string(i) + " has wrong population");
    if (!c.ground_truth || c.ground_truth->size() != population)
      throw Error("dataset: configuration " + std::to_string(i) + " lacks a full ground truth");
    for (Label g : *c.ground_truth) {
      if (g > 1) throw Error("dataset: configuration " + std::to_string(i) + " has a non-binary label");
    }
  }
}

}  // namespace astroknn
