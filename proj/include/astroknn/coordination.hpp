#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "astroknn/geometry.hpp"
#include "astroknn/types.hpp"

namespace astroknn {

/// Draws one in-annulus target per astrobot. A target closer than
/// `min_target_sep` to an already placed neighbor target is redrawn, up to
/// 100 times, before giving up with "unassignable configuration".
Configuration assign_targets(const SwarmLayout& layout, Rng& rng, double min_target_sep);

/// Called after every simulated tick with the committed arm chains and the
/// convergence flags. Used by tests to check the safety invariant.
using TickObserver =
    std::function<void(int tick, std::span<const ArmChain> chains, std::span<const Label> converged)>;

/// Priority-stepped coordination from the folded formation with a collision
/// veto. Returns one bit per astrobot: 1 if its ferrule ended within
/// tol_converge of the target.
Labels simulate(const SwarmLayout& layout, const Configuration& config, const SimParams& params, Rng& rng,
                const TickObserver& observer = {});

/// `count` configurations, each seeded from seed ^ index so the result does
/// not depend on the execution policy. min_target_sep defaults to eps_safety.
Dataset generate_dataset(const SwarmLayout& layout, std::size_t count, const SimParams& params,
                         std::uint64_t seed, std::optional<double> min_target_sep = std::nullopt,
                         Exec exec = Exec::parallel);

/// Fraction of converged astrobots over all labeled configurations.
double mean_convergence_rate(const Dataset& ds);

}  // namespace astroknn
