#include "astroknn/predictor.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace astroknn {

TrainingSet::TrainingSet(const Dataset& ds, std::span<const std::size_t> ids) {
  population_ = ds.population;
  targets_.reserve(ids.size() * population_);
  labels_.reserve(ids.size() * population_);
  for (std::size_t id : ids) {
    if (id >= ds.size()) throw Error("training set: configuration id out of range");
    append(ds.configurations[id]);
  }
}

TrainingSet::TrainingSet(std::span<const Configuration> configs) {
  if (!configs.empty()) population_ = configs.front().population();
  for (const auto& c : configs) append(c);
}

void TrainingSet::append(const Configuration& c) {
  if (c.population() != population_) throw Error("training set: population mismatch");
  if (!c.ground_truth || c.ground_truth->size() != population_)
    throw Error("training set: configuration without ground truth");
  targets_.insert(targets_.end(), c.targets.begin(), c.targets.end());
  labels_.insert(labels_.end(), c.ground_truth->begin(), c.ground_truth->end());
  ++size_;
}

FrequencyVectors frequency_vectors(const TrainingSet& train) {
  if (train.size() == 0) throw Error("frequency vectors: empty train split");
  const std::size_t n = train.population();
  FrequencyVectors f;
  f.configs = train.size();
  f.u.assign(n, 0);
  for (std::size_t c = 0; c < train.size(); ++c) {
    const auto g = train.labels(c);
    for (std::size_t i = 0; i < n; ++i) f.u[i] += g[i];
  }
  f.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.v[i] = static_cast<std::int64_t>(f.configs) - f.u[i];
  return f;
}

WeightVector weight_vector(const FrequencyVectors& freq, const SwarmLayout& layout, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw Error("weights: corrector coefficients must be positive");
  if (freq.u.size() != layout.size() || freq.v.size() != layout.size())
    throw Error("weights: frequency vectors do not match the layout");
  WeightVector wv;
  wv.alpha = alpha;
  wv.beta = beta;
  wv.w.resize(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto u = static_cast<double>(freq.u[i]);
    const auto v = static_cast<double>(freq.v[i]);
    const double base = freq.v[i] == 0 ? u : u / v;
    const double corrector = layout.degree(static_cast<int>(i)) == 6 ? alpha : beta;
    double w = corrector * base;
    if (!(w > 0.0)) {
      w = kMinWeight;
      wv.clamped.push_back(static_cast<int>(i));
    }
    wv.w[i] = w;
  }
  return wv;
}

void Hyperparameters::validate(std::size_t train_size) const {
  if (k < 1) throw Error("hyperparameters: k must be at least 1");
  if (k > train_size)
    throw Error("hyperparameters: k = " + std::to_string(k) + " exceeds train size " + std::to_string(train_size));
  if (!(alpha > 0.0) || !(beta > 0.0)) throw Error("hyperparameters: alpha and beta must be positive");
  if (!(q >= 0.0 && q <= 1.0)) throw Error("hyperparameters: q must lie in [0, 1]");
}

double distance(std::span<const Vec2> test, std::span<const Vec2> train, std::span<const int> columns) {
  if (test.size() != train.size()) throw Error("distance: population mismatch");
  double sum = 0.0;
  for (int j : columns) {
    if (j < 0 || static_cast<std::size_t>(j) >= test.size()) throw Error("distance: column out of range");
    sum += norm(test[j] - train[j]);
  }
  return sum;
}

double distance(const Configuration& test, const Configuration& train, std::span<const int> columns) {
  return distance(std::span<const Vec2>(test.targets), std::span<const Vec2>(train.targets), columns);
}

std::vector<std::size_t> k_closest(const TrainingSet& train, const Configuration& test, std::size_t k,
                                   std::span<const int> columns) {
  if (k > train.size()) throw Error("k_closest: k exceeds train size");
  std::vector<double> dist(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) dist[i] = distance(test.targets, train.targets(i), columns);
  std::vector<std::size_t> idx(train.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  idx.resize(k);
  return idx;
}

std::vector<double> primary_probabilities(const TrainingSet& train, std::span<const std::size_t> selected,
                                          const WeightVector& weights, std::span<const int> columns) {
  if (selected.empty()) throw Error("primary probabilities: no selected configurations");
  std::vector<double> out;
  out.reserve(columns.size());
  for (int j : columns) {
    std::size_t ones = 0;
    for (std::size_t row : selected) ones += train.label(row, static_cast<std::size_t>(j));
    out.push_back(primary_probability(ones, selected.size() - ones, weights.w.at(static_cast<std::size_t>(j))));
  }
  return out;
}

Labels threshold(std::span<const double> probabilities, double q) {
  Labels y(probabilities.size());
  std::transform(probabilities.begin(), probabilities.end(), y.begin(),
                 [q](double p) { return static_cast<Label>(p > q ? 1 : 0); });
  return y;
}

PredictionResult predict_from_ranking(const SwarmLayout& layout, const TrainingSet& train,
                                      const NeighborRanking& ranking, const WeightVector& weights,
                                      const Hyperparameters& hp) {
  hp.validate(train.size());
  if (hp.k > ranking.depth) throw Error("prediction: k exceeds ranking depth");
  const std::size_t n = layout.size();
  if (ranking.rows.size() != n || weights.w.size() != n) throw Error("prediction: layout mismatch");

  std::vector<double> sum(n, 0.0);
  PredictionResult res;
  res.eta.assign(n, 0);
  for (std::size_t center = 0; center < n; ++center) {
    const std::span<const std::size_t> selected(ranking.rows[center].data(), hp.k);
    const Neighborhood nb = neighborhood_of(layout, static_cast<int>(center));
    const auto local = primary_probabilities(train, selected, weights, nb.member_ids);
    for (std::size_t m = 0; m < nb.member_ids.size(); ++m) {
      sum[nb.member_ids[m]] += local[m];
      ++res.eta[nb.member_ids[m]];
    }
  }
  res.probabilities.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.probabilities[i] = sum[i] / res.eta[i];
  res.labels = threshold(res.probabilities, hp.q);
  return res;
}

PredictionResult localized_predict(const SwarmLayout& layout, const TrainingSet& train, const WeightVector& weights,
                                   const Configuration& test, const Hyperparameters& hp, Exec exec) {
  hp.validate(train.size());
  const NeighborRanking ranking = rank_neighborhoods(layout, train, test, hp.k, exec);
  return predict_from_ranking(layout, train, ranking, weights, hp);
}

PredictionResult global_predict(const SwarmLayout& layout, const TrainingSet& train, const WeightVector& weights,
                                const Configuration& test, const Hyperparameters& hp) {
  hp.validate(train.size());
  std::vector<int> all(layout.size());
  std::iota(all.begin(), all.end(), 0);
  const auto selected = k_closest(train, test, hp.k, all);
  PredictionResult res;
  res.probabilities = primary_probabilities(train, selected, weights, all);
  res.labels = threshold(res.probabilities, hp.q);
  res.eta.assign(layout.size(), 1);
  return res;
}

ConvergencePredictor::ConvergencePredictor(const SwarmLayout& layout, TrainingSet train)
    : layout_(layout), train_(std::move(train)), freq_(frequency_vectors(train_)) {
  if (train_.population() != layout_.size()) throw Error("predictor: train split does not match the layout");
}

PredictionResult ConvergencePredictor::predict(const Configuration& test, const Hyperparameters& hp,
                                               Exec exec) const {
  return localized_predict(layout_, train_, weights(hp.alpha, hp.beta), test, hp, exec);
}

}  // namespace astroknn
