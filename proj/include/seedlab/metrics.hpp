#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seedlab/error.hpp"

namespace seedlab::metrics {

/// counts(i, j): samples of true class i predicted as class j.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t classes);

  std::size_t classes() const noexcept { return n_; }
  std::uint64_t operator()(std::size_t truth, std::size_t predicted) const noexcept {
    return counts_[truth * n_ + predicted];
  }
  void add(std::size_t truth, std::size_t predicted, std::uint64_t count = 1);

  std::uint64_t total() const noexcept;
  std::uint64_t trace() const noexcept;
  std::uint64_t row_sum(std::size_t i) const noexcept;
  std::uint64_t col_sum(std::size_t j) const noexcept;

  /// Elementwise sum; both matrices must have the same class count.
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> counts_;
};

/// Throws LengthMismatch on unequal or empty inputs, InvalidArgument on a
/// label outside [0, classes).
ConfusionMatrix confusion_from_predictions(std::span<const int> truth,
                                           std::span<const int> predicted, std::size_t classes);

struct ClassMetrics {
  double sensitivity = 0;
  double specificity = 0;
  double precision = 0;
  double f1 = 0;
};

enum MetricFlag : std::uint32_t {
  kPrecisionUndefined = 1u << 0,    // some class was never predicted
  kSensitivityUndefined = 1u << 1,  // some class has no true samples
  kSpecificityUndefined = 1u << 2,
  kF1Undefined = 1u << 3,
};

/// All values are percentages.
struct MetricsReport {
  double accuracy = 0;
  double macro_specificity = 0;
  double macro_sensitivity = 0;
  double macro_precision = 0;
  double mavg = 0;
  double mava = 0;
  double mfm = 0;
  std::vector<ClassMetrics> per_class;  // fractions in [0, 1]
  std::uint32_t flags = 0;
};

/// One-vs-rest per-class rates and the class-imbalance aggregates. The
/// partial accuracy of a class is its sensitivity; undefined ratios are 0 and
/// flagged. Throws EmptyMatrix when the matrix holds no samples.
MetricsReport compute_metrics(const ConfusionMatrix& cm);

}  // namespace seedlab::metrics
