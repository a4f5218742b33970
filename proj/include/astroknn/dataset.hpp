#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "astroknn/types.hpp"

namespace astroknn {

/// JSON-lines: a header record {layout_fingerprint, sim_params, seed, n,
/// count}, then one {"id", "targets", "g"} record per configuration.
std::string dataset_to_jsonl(const Dataset& ds);
Dataset dataset_from_jsonl(const std::string& text);

void save_dataset(const Dataset& ds, const std::filesystem::path& path);
/// When `expected_fingerprint` is given, a dataset built over another layout
/// is rejected.
Dataset load_dataset(const std::filesystem::path& path,
                     const std::optional<std::string>& expected_fingerprint = std::nullopt);

/// Parses a single configuration record ({"targets": [[x,y]...], "g": [...]}),
/// "g" optional.
Configuration configuration_from_json(const std::string& text);
std::string configuration_to_json(const Configuration& cfg, std::size_t id);

struct SplitPlan {
  std::size_t iterations = 15;
  std::size_t test_count = 51;
  std::uint64_t seed = 0;

  void validate(std::size_t dataset_size) const;
};

struct Split {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

/// Independent draws per iteration of test_count ids without replacement,
/// all from one stream seeded by plan.seed.
std::vector<Split> monte_carlo_splits(std::size_t dataset_size, const SplitPlan& plan);
inline std::vector<Split> monte_carlo_splits(const Dataset& ds, const SplitPlan& plan) {
  return monte_carlo_splits(ds.size(), plan);
}

}  // namespace astroknn
