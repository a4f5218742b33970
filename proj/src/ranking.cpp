#include <algorithm>
#include <numeric>

#include "astroknn/predictor.hpp"

namespace astroknn {

namespace {

NeighborRanking rank_serial(const SwarmLayout& layout, const TrainingSet& train, const Configuration& test,
                            std::size_t depth) {
  NeighborRanking r;
  r.depth = depth;
  r.rows.resize(layout.size());
  for (std::size_t c = 0; c < layout.size(); ++c) {
    const Neighborhood nb = neighborhood_of(layout, static_cast<int>(c));
    r.rows[c] = k_closest(train, test, depth, nb.member_ids);
  }
  return r;
}

// Per-astrobot norms are computed once per train row and summed per
// neighborhood in member order, which reproduces distance() bit for bit.
NeighborRanking rank_parallel(const SwarmLayout& layout, const TrainingSet& train, const Configuration& test,
                              std::size_t depth) {
  const std::size_t n = layout.size();
  const auto rows = static_cast<std::ptrdiff_t>(train.size());
  std::vector<double> column_dist(train.size() * n);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const auto t = train.targets(static_cast<std::size_t>(i));
    double* out = column_dist.data() + static_cast<std::size_t>(i) * n;
    for (std::size_t j = 0; j < n; ++j) out[j] = norm(test.targets[j] - t[j]);
  }

  NeighborRanking r;
  r.depth = depth;
  r.rows.resize(n);
  const auto centers = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel
  {
    std::vector<double> dist(train.size());
    std::vector<std::size_t> idx(train.size());
#pragma omp for schedule(dynamic, 4)
    for (std::ptrdiff_t c = 0; c < centers; ++c) {
      const Neighborhood nb = neighborhood_of(layout, static_cast<int>(c));
      for (std::size_t i = 0; i < train.size(); ++i) {
        const double* row = column_dist.data() + i * n;
        double sum = 0.0;
        for (int j : nb.member_ids) sum += row[j];
        dist[i] = sum;
      }
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      auto closer = [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); };
      std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(depth), idx.end(), closer);
      r.rows[static_cast<std::size_t>(c)].assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(depth));
    }
  }
  return r;
}

}  // namespace

NeighborRanking rank_neighborhoods(const SwarmLayout& layout, const TrainingSet& train, const Configuration& test,
                                   std::size_t depth, Exec exec) {
  if (depth < 1 || depth > train.size()) throw Error("ranking: depth must lie in [1, train size]");
  if (test.population() != layout.size() || train.population() != layout.size())
    throw Error("ranking: population mismatch");
  return exec == Exec::serial ? rank_serial(layout, train, test, depth) : rank_parallel(layout, train, test, depth);
}

}  // namespace astroknn
