#include "astroknn/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "astroknn/layout_io.hpp"

namespace astroknn {

namespace {

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_rate(const Rate& r) { return r.has_value() ? format_number(r.value()) : "NA"; }

MetricsReport report_from(const SwarmLayout& layout, std::span<const ConfusionCounts> per_astrobot) {
  ConfusionCounts total;
  for (const auto& c : per_astrobot) total += c;
  MetricsReport report = metrics(total);
  for (std::size_t i = 0; i < layout.size(); ++i) {
    auto& group = report.per_neighbor_count[layout.degree(static_cast<int>(i))];
    ++group.astrobots;
    group.counts += per_astrobot[i];
  }
  for (auto& [degree, group] : report.per_neighbor_count) {
    const RateSet r = rates(group.counts);
    group.tpr = r.tpr;
    group.tnr = r.tnr;
    group.balanced_accuracy = r.balanced_accuracy;
  }
  return report;
}

void write_rate_columns(std::ostream& out, const Hyperparameters& hp, const MetricsReport& m) {
  const auto& r = m.rates;
  out << hp.k << ',' << format_number(hp.alpha) << ',' << format_number(hp.beta) << ',' << format_number(hp.q) << ','
      << m.counts.tp << ',' << m.counts.fp << ',' << m.counts.tn << ',' << m.counts.fn << ',' << format_rate(r.tpr)
      << ',' << format_rate(r.tnr) << ',' << format_rate(r.fpr) << ',' << format_rate(r.fnr) << ','
      << format_rate(r.balanced_accuracy) << ',' << format_rate(r.precision) << ',' << format_rate(r.recall) << ','
      << format_rate(r.f1) << '\n';
}

constexpr const char* kRateHeader = "k,alpha,beta,q,tp,fp,tn,fn,tpr,tnr,fpr,fnr,balanced_accuracy,precision,recall,f1";

}  // namespace

ConfusionCounts confusion(std::span<const Label> predicted, std::span<const Label> actual) {
  if (predicted.size() != actual.size()) throw Error("confusion: length mismatch");
  ConfusionCounts c;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i]) {
      (actual[i] ? c.tp : c.fp) += 1;
    } else {
      (actual[i] ? c.fn : c.tn) += 1;
    }
  }
  return c;
}

Rate Rate::ratio(std::uint64_t num, std::uint64_t den, const char* reason_if_zero) {
  if (den == 0) return missing(reason_if_zero);
  return of(static_cast<double>(num) / static_cast<double>(den));
}

double Rate::value() const {
  if (!has_value()) throw Error("undefined rate: " + reason_);
  return value_;
}

RateSet rates(const ConfusionCounts& c) {
  RateSet r;
  r.tpr = Rate::ratio(c.tp, c.tp + c.fn, "no actual positives");
  r.tnr = Rate::ratio(c.tn, c.tn + c.fp, "no actual negatives");
  r.fnr = r.tpr.has_value() ? Rate::of(1.0 - r.tpr.value()) : r.tpr;
  r.fpr = r.tnr.has_value() ? Rate::of(1.0 - r.tnr.value()) : r.tnr;
  if (r.tpr.has_value() && r.tnr.has_value()) {
    r.balanced_accuracy = Rate::of((r.tpr.value() + r.tnr.value()) / 2.0);
  } else {
    r.balanced_accuracy = Rate::missing(r.tpr.has_value() ? r.tnr.reason() : r.tpr.reason());
  }
  r.precision = Rate::ratio(c.tp, c.tp + c.fp, "no positive predictions");
  r.recall = r.tpr;
  if (!r.precision.has_value()) {
    r.f1 = Rate::missing(r.precision.reason());
  } else if (!r.recall.has_value()) {
    r.f1 = Rate::missing(r.recall.reason());
  } else if (r.precision.value() + r.recall.value() == 0.0) {
    r.f1 = Rate::missing("precision and recall are both zero");
  } else {
    const double p = r.precision.value();
    const double rc = r.recall.value();
    r.f1 = Rate::of(2.0 * p * rc / (p + rc));
  }
  return r;
}

MetricsReport metrics(const ConfusionCounts& counts) {
  MetricsReport m;
  m.counts = counts;
  m.rates = rates(counts);
  return m;
}

std::vector<EvaluationResult> evaluate_grid(const Dataset& ds, const SwarmLayout& layout,
                                            std::span<const Hyperparameters> grid, const SplitPlan& plan) {
  if (grid.empty()) throw Error("evaluation: empty hyperparameter grid");
  if (ds.population != layout.size()) throw Error("evaluation: dataset population does not match the layout");
  if (ds.layout_fingerprint != layout_fingerprint(layout))
    throw Error("evaluation: dataset was generated over a different layout");
  ds.validate();

  const auto splits = monte_carlo_splits(ds, plan);
  std::size_t depth = 0;
  for (const auto& hp : grid) depth = std::max(depth, hp.k);

  const std::size_t n = layout.size();
  std::vector<EvaluationResult> results(grid.size());
  std::vector<std::vector<ConfusionCounts>> pooled(grid.size(), std::vector<ConfusionCounts>(n));
  for (std::size_t g = 0; g < grid.size(); ++g) results[g].hp = grid[g];

  for (const auto& split : splits) {
    const TrainingSet train(ds, split.train);
    for (const auto& hp : grid) hp.validate(train.size());
    const FrequencyVectors freq = frequency_vectors(train);
    std::vector<WeightVector> weights;
    weights.reserve(grid.size());
    for (const auto& hp : grid) weights.push_back(weight_vector(freq, layout, hp.alpha, hp.beta));

    std::vector<std::vector<ConfusionCounts>> per_bot(grid.size(), std::vector<ConfusionCounts>(n));
    for (std::size_t id : split.test) {
      const Configuration& test = ds.configurations[id];
      const NeighborRanking ranking = rank_neighborhoods(layout, train, test, depth);
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const PredictionResult pred = predict_from_ranking(layout, train, ranking, weights[g], grid[g]);
        const Labels& actual = *test.ground_truth;
        for (std::size_t i = 0; i < n; ++i) {
          per_bot[g][i] += confusion(std::span(&pred.labels[i], 1), std::span(&actual[i], 1));
        }
      }
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
      results[g].per_iteration.push_back(report_from(layout, per_bot[g]));
      for (std::size_t i = 0; i < n; ++i) pooled[g][i] += per_bot[g][i];
    }
  }
  for (std::size_t g = 0; g < grid.size(); ++g) results[g].pooled = report_from(layout, pooled[g]);
  return results;
}

EvaluationResult monte_carlo_evaluate(const Dataset& ds, const SwarmLayout& layout, const Hyperparameters& hp,
                                      const SplitPlan& plan) {
  return evaluate_grid(ds, layout, std::span(&hp, 1), plan).front();
}

SweepAxis sweep_axis_from_string(std::string_view name) {
  if (name == "k") return SweepAxis::k;
  if (name == "correctors") return SweepAxis::correctors;
  if (name == "alpha") return SweepAxis::alpha;
  if (name == "beta") return SweepAxis::beta;
  throw Error("unknown sweep axis '" + std::string(name) + "'");
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::k:
      return "k";
    case SweepAxis::correctors:
      return "correctors";
    case SweepAxis::alpha:
      return "alpha";
    case SweepAxis::beta:
      return "beta";
  }
  return "unknown";
}

std::vector<SweepRow> sweep(const Dataset& ds, const SwarmLayout& layout, const SplitPlan& plan,
                            const Hyperparameters& base, SweepAxis axis, std::span<const double> values) {
  if (values.empty()) throw Error("sweep: no values");
  std::vector<Hyperparameters> grid;
  for (double v : values) {
    Hyperparameters hp = base;
    switch (axis) {
      case SweepAxis::k:
        if (!(v >= 1.0) || v != std::floor(v)) throw Error("sweep: k values must be positive integers");
        hp.k = static_cast<std::size_t>(v);
        break;
      case SweepAxis::correctors:
        hp.alpha = hp.beta = v;
        break;
      case SweepAxis::alpha:
        hp.alpha = v;
        break;
      case SweepAxis::beta:
        hp.beta = v;
        break;
    }
    grid.push_back(hp);
  }
  auto results = evaluate_grid(ds, layout, grid, plan);
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < values.size(); ++i) rows.push_back({values[i], std::move(results[i])});
  return rows;
}

std::vector<RocPoint> roc_sweep(const Dataset& ds, const SwarmLayout& layout, const SplitPlan& plan, std::size_t k,
                                std::span<const double> correctors, double q) {
  if (correctors.size() < 2) throw Error("roc: at least two corrector values are required");
  Hyperparameters base;
  base.k = k;
  base.q = q;
  const auto rows = sweep(ds, layout, plan, base, SweepAxis::correctors, correctors);
  std::vector<RocPoint> points;
  for (const auto& row : rows) {
    const auto& r = row.result.pooled.rates;
    points.push_back({row.value, r.fpr.value(), r.tpr.value()});
  }
  std::stable_sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fpr < b.fpr || (a.fpr == b.fpr && a.tpr < b.tpr);
  });
  return points;
}

void write_metrics_csv(std::ostream& out, const EvaluationResult& result) {
  out << "iteration," << kRateHeader << '\n';
  for (std::size_t i = 0; i < result.per_iteration.size(); ++i) {
    out << i << ',';
    write_rate_columns(out, result.hp, result.per_iteration[i]);
  }
  out << "pooled,";
  write_rate_columns(out, result.hp, result.pooled);
}

void write_breakdown_csv(std::ostream& out, const MetricsReport& report) {
  out << "degree,astrobots,tpr,tnr,balanced\n";
  for (const auto& [degree, g] : report.per_neighbor_count) {
    out << degree << ',' << g.astrobots << ',' << format_rate(g.tpr) << ',' << format_rate(g.tnr) << ','
        << format_rate(g.balanced_accuracy) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, SweepAxis axis, std::span<const SweepRow> rows) {
  out << to_string(axis) << ',' << kRateHeader << '\n';
  for (const auto& row : rows) {
    out << format_number(row.value) << ',';
    write_rate_columns(out, row.result.hp, row.result.pooled);
  }
}

void write_roc_csv(std::ostream& out, std::span<const RocPoint> points) {
  out << "fpr,tpr,alpha\n";
  for (const auto& p : points) out << format_number(p.fpr) << ',' << format_number(p.tpr) << ',' << format_number(p.alpha) << '\n';
}

}  // namespace astroknn
