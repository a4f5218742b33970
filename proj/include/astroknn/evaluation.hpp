#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "astroknn/dataset.hpp"
#include "astroknn/predictor.hpp"

namespace astroknn {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts confusion(std::span<const Label> predicted, std::span<const Label> actual);

/// A ratio that may be undefined; an undefined rate carries the reason
/// instead of a silent 0.
class Rate {
 public:
  Rate() : reason_("not computed") {}
  static Rate of(double value) { return Rate(value, {}); }
  static Rate missing(std::string reason) { return Rate(0.0, std::move(reason)); }
  static Rate ratio(std::uint64_t num, std::uint64_t den, const char* reason_if_zero);

  bool has_value() const { return reason_.empty(); }
  /// Throws Error carrying the reason when undefined.
  double value() const;
  double value_or(double fallback) const { return has_value() ? value_ : fallback; }
  const std::string& reason() const { return reason_; }

 private:
  Rate(double v, std::string reason) : value_(v), reason_(std::move(reason)) {}
  double value_ = 0.0;
  std::string reason_;
};

struct RateSet {
  Rate tpr, tnr, fpr, fnr, balanced_accuracy, precision, recall, f1;
};

RateSet rates(const ConfusionCounts& counts);

struct DegreeBreakdown {
  std::size_t astrobots = 0;
  ConfusionCounts counts;
  Rate tpr, tnr, balanced_accuracy;
};

struct MetricsReport {
  ConfusionCounts counts;
  RateSet rates;
  std::map<int, DegreeBreakdown> per_neighbor_count;  // keyed by degree 0..6
};

/// Rates portion only; per_neighbor_count is left empty.
MetricsReport metrics(const ConfusionCounts& counts);

struct EvaluationResult {
  Hyperparameters hp;
  MetricsReport pooled;  // rates from counts summed over iterations
  std::vector<MetricsReport> per_iteration;
};

/// Monte Carlo cross-validation of one hyperparameter setting.
EvaluationResult monte_carlo_evaluate(const Dataset& ds, const SwarmLayout& layout, const Hyperparameters& hp,
                                      const SplitPlan& plan);

/// Evaluates several settings on the same splits, sharing neighbor rankings.
std::vector<EvaluationResult> evaluate_grid(const Dataset& ds, const SwarmLayout& layout,
                                            std::span<const Hyperparameters> grid, const SplitPlan& plan);

enum class SweepAxis { k, correctors, alpha, beta };
SweepAxis sweep_axis_from_string(std::string_view name);
std::string_view to_string(SweepAxis axis);

struct SweepRow {
  double value = 0.0;
  EvaluationResult result;
};

/// One evaluation per value along `axis`, the rest of `base` held fixed.
std::vector<SweepRow> sweep(const Dataset& ds, const SwarmLayout& layout, const SplitPlan& plan,
                            const Hyperparameters& base, SweepAxis axis, std::span<const double> values);

struct RocPoint {
  double alpha = 0.0;  // alpha = beta
  double fpr = 0.0;
  double tpr = 0.0;
};

/// One (FPR, TPR) point per corrector value at fixed k, sorted by FPR.
std::vector<RocPoint> roc_sweep(const Dataset& ds, const SwarmLayout& layout, const SplitPlan& plan, std::size_t k,
                                std::span<const double> correctors, double q = 0.5);

void write_metrics_csv(std::ostream& out, const EvaluationResult& result);
void write_breakdown_csv(std::ostream& out, const MetricsReport& report);
void write_sweep_csv(std::ostream& out, SweepAxis axis, std::span<const SweepRow> rows);
void write_roc_csv(std::ostream& out, std::span<const RocPoint> points);

}  // namespace astroknn
