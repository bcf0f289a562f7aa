#include "seedlab/metrics.hpp"

#include <cmath>

namespace seedlab::metrics {

ConfusionMatrix::ConfusionMatrix(std::size_t classes) : n_(classes), counts_(classes * classes, 0) {
  if (classes == 0) throw Error(ErrorKind::InvalidArgument, "confusion matrix needs a class");
}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted, std::uint64_t count) {
  if (truth >= n_ || predicted >= n_) {
    throw Error(ErrorKind::InvalidArgument, "label outside the confusion matrix");
  }
  counts_[truth * n_ + predicted] += count;
}

std::uint64_t ConfusionMatrix::total() const noexcept {
  std::uint64_t t = 0;
  for (const auto c : counts_) t += c;
  return t;
}

std::uint64_t ConfusionMatrix::trace() const noexcept {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t i) const noexcept {
  std::uint64_t t = 0;
  for (std::size_t j = 0; j < n_; ++j) t += (*this)(i, j);
  return t;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t j) const noexcept {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, j);
  return t;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.n_ != n_) throw Error(ErrorKind::DimensionMismatch, "class counts differ");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

ConfusionMatrix confusion_from_predictions(std::span<const int> truth,
                                           std::span<const int> predicted, std::size_t classes) {
  if (truth.size() != predicted.size() || truth.empty()) {
    throw Error(ErrorKind::LengthMismatch, "truth and prediction lengths must match and be >= 1");
  }
  ConfusionMatrix cm(classes);
  for (std::size_t t = 0; t < truth.size(); ++t) {
    if (truth[t] < 0 || predicted[t] < 0) {
      throw Error(ErrorKind::InvalidArgument, "negative class label");
    }
    cm.add(static_cast<std::size_t>(truth[t]), static_cast<std::size_t>(predicted[t]));
  }
  return cm;
}

MetricsReport compute_metrics(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  if (total == 0) throw Error(ErrorKind::EmptyMatrix, "confusion matrix has no samples");

  MetricsReport r;
  const std::size_t J = cm.classes();
  r.per_class.resize(J);

  auto ratio = [&](std::uint64_t num, std::uint64_t den, MetricFlag flag) {
    if (den == 0) {
      r.flags |= flag;
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };

  double sum_sens = 0, sum_spec = 0, sum_prec = 0, sum_f1 = 0;
  double log_prod = 0.0;
  bool any_zero = false;
  for (std::size_t i = 0; i < J; ++i) {
    const std::uint64_t tp = cm(i, i);
    const std::uint64_t fn = cm.row_sum(i) - tp;
    const std::uint64_t fp = cm.col_sum(i) - tp;
    const std::uint64_t tn = total - tp - fn - fp;

    ClassMetrics& c = r.per_class[i];
    c.sensitivity = ratio(tp, tp + fn, kSensitivityUndefined);
    c.specificity = ratio(tn, fp + tn, kSpecificityUndefined);
    c.precision = ratio(tp, tp + fp, kPrecisionUndefined);
    if (c.precision + c.sensitivity > 0.0) {
      c.f1 = 2.0 * c.precision * c.sensitivity / (c.precision + c.sensitivity);
    } else {
      r.flags |= kF1Undefined;
    }
    sum_sens += c.sensitivity;
    sum_spec += c.specificity;
    sum_prec += c.precision;
    sum_f1 += c.f1;
    if (c.sensitivity > 0.0) {
      log_prod += std::log(c.sensitivity);
    } else {
      any_zero = true;
    }
  }

  const auto n = static_cast<double>(J);
  r.accuracy = 100.0 * static_cast<double>(cm.trace()) / static_cast<double>(total);
  r.macro_sensitivity = 100.0 * sum_sens / n;
  r.macro_specificity = 100.0 * sum_spec / n;
  r.macro_precision = 100.0 * sum_prec / n;
  r.mava = 100.0 * sum_sens / n;
  r.mavg = any_zero ? 0.0 : 100.0 * std::exp(log_prod / n);
  r.mfm = 100.0 * sum_f1 / n;
  // exp/log rounding must not break the AM-GM ordering.
  r.mavg = std::min(r.mavg, r.mava);
  return r;
}

}  // namespace seedlab::metrics
