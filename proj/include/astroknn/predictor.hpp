#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "astroknn/geometry.hpp"
#include "astroknn/types.hpp"

namespace astroknn {

/// Train split packed row-major (configuration x astrobot) for scanning.
class TrainingSet {
 public:
  TrainingSet() = default;
  /// Packs the configurations of `ds` listed in `ids`, in that order.
  TrainingSet(const Dataset& ds, std::span<const std::size_t> ids);
  explicit TrainingSet(std::span<const Configuration> configs);

  std::size_t size() const { return size_; }
  std::size_t population() const { return population_; }
  std::span<const Vec2> targets(std::size_t cfg) const {
    return {targets_.data() + cfg * population_, population_};
  }
  std::span<const Label> labels(std::size_t cfg) const {
    return {labels_.data() + cfg * population_, population_};
  }
  Label label(std::size_t cfg, std::size_t astrobot) const { return labels_[cfg * population_ + astrobot]; }

 private:
  void append(const Configuration& c);

  std::size_t size_ = 0;
  std::size_t population_ = 0;
  std::vector<Vec2> targets_;
  std::vector<Label> labels_;
};

/// u[i]: train configurations where astrobot i converged; v[i] = N - u[i].
struct FrequencyVectors {
  std::vector<std::int64_t> u;
  std::vector<std::int64_t> v;
  std::size_t configs = 0;
};

FrequencyVectors frequency_vectors(const TrainingSet& train);

inline constexpr double kMinWeight = 1e-9;

/// Per-astrobot weight applied to observed 0 labels.
struct WeightVector {
  std::vector<double> w;
  double alpha = 1.0;  // astrobots with exactly 6 neighbors
  double beta = 1.0;   // everyone else
  std::vector<int> clamped;  // ids whose weight was 0 and got kMinWeight
};

/// base = u if v == 0 else u / v, scaled by alpha or beta.
WeightVector weight_vector(const FrequencyVectors& freq, const SwarmLayout& layout, double alpha, double beta);

struct Hyperparameters {
  std::size_t k = 13;
  double alpha = 1.0;
  double beta = 1.0;
  double q = 0.5;

  void validate(std::size_t train_size) const;
};

struct PredictionResult {
  std::vector<double> probabilities;  // final probability per astrobot
  Labels labels;
  std::vector<int> eta;  // neighborhoods containing each astrobot
};

/// Sum over `columns` of the per-astrobot target displacement norms.
double distance(std::span<const Vec2> test, std::span<const Vec2> train, std::span<const int> columns);
double distance(const Configuration& test, const Configuration& train, std::span<const int> columns);

/// Indices of the k nearest train configurations, ascending by distance,
/// ties by ascending index.
std::vector<std::size_t> k_closest(const TrainingSet& train, const Configuration& test, std::size_t k,
                                   std::span<const int> columns);

/// ones / (ones + w * zeros)
inline double primary_probability(std::size_t ones, std::size_t zeros, double w) {
  const double n1 = static_cast<double>(ones);
  return n1 / (n1 + w * static_cast<double>(zeros));
}

/// One probability per entry of `columns` from the selected train rows.
std::vector<double> primary_probabilities(const TrainingSet& train, std::span<const std::size_t> selected,
                                          const WeightVector& weights, std::span<const int> columns);

/// label 1 iff probability > q.
Labels threshold(std::span<const double> probabilities, double q);

/// Nearest train rows for every neighborhood of one test configuration,
/// `depth` deep. Any k <= depth reads a prefix, so one ranking serves a
/// whole hyperparameter grid.
struct NeighborRanking {
  std::size_t depth = 0;
  std::vector<std::vector<std::size_t>> rows;  // indexed by neighborhood center id
};

/// Exec::serial is the reference path (k_closest per neighborhood);
/// Exec::parallel caches per-astrobot distances and ranks neighborhoods
/// concurrently. Both return identical rankings.
NeighborRanking rank_neighborhoods(const SwarmLayout& layout, const TrainingSet& train, const Configuration& test,
                                   std::size_t depth, Exec exec = Exec::parallel);

PredictionResult predict_from_ranking(const SwarmLayout& layout, const TrainingSet& train,
                                      const NeighborRanking& ranking, const WeightVector& weights,
                                      const Hyperparameters& hp);

/// Neighborhood-localized prediction: every astrobot's probability is the
/// mean of its local probabilities over all neighborhoods it belongs to.
PredictionResult localized_predict(const SwarmLayout& layout, const TrainingSet& train, const WeightVector& weights,
                                   const Configuration& test, const Hyperparameters& hp, Exec exec = Exec::parallel);

/// Unlocalized variant: one distance over every column, eta = 1.
PredictionResult global_predict(const SwarmLayout& layout, const TrainingSet& train, const WeightVector& weights,
                                const Configuration& test, const Hyperparameters& hp);

/// A trained (lazy) model: the packed train split and its frequency vectors.
class ConvergencePredictor {
 public:
  ConvergencePredictor(const SwarmLayout& layout, TrainingSet train);

  const TrainingSet& train() const { return train_; }
  const FrequencyVectors& frequencies() const { return freq_; }
  WeightVector weights(double alpha, double beta) const { return weight_vector(freq_, layout_, alpha, beta); }
  PredictionResult predict(const Configuration& test, const Hyperparameters& hp, Exec exec = Exec::parallel) const;

 private:
  SwarmLayout layout_;
  TrainingSet train_;
  FrequencyVectors freq_;
};

}  // namespace astroknn
