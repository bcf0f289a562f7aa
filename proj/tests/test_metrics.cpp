#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "seedlab/metrics.hpp"

using namespace seedlab;
using namespace seedlab::metrics;

namespace {

ConfusionMatrix from_rows(const std::vector<std::vector<std::uint64_t>>& rows) {
  ConfusionMatrix cm(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) cm.add(i, j, rows[i][j]);
  }
  return cm;
}

ConfusionMatrix random_matrix(std::mt19937_64& rng, std::size_t j, int max_count) {
  ConfusionMatrix cm(j);
  std::uniform_int_distribution<int> d(0, max_count);
  for (std::size_t a = 0; a < j; ++a) {
    for (std::size_t b = 0; b < j; ++b) cm.add(a, b, static_cast<std::uint64_t>(d(rng)));
  }
  if (cm.total() == 0) cm.add(0, 0);
  return cm;
}

std::array<double, 7> aggregates(const MetricsReport& r) {
  return {r.accuracy, r.macro_specificity, r.macro_sensitivity, r.macro_precision,
          r.mavg,     r.mava,              r.mfm};
}

// Straight from the one-vs-rest counting definitions.
std::array<double, 7> oracle(const ConfusionMatrix& cm) {
  const std::size_t j = cm.classes();
  double total = 0, trace = 0;
  for (std::size_t a = 0; a < j; ++a) {
    for (std::size_t b = 0; b < j; ++b) total += cm(a, b);
    trace += cm(a, a);
  }
  double sen_sum = 0, spe_sum = 0, pre_sum = 0, f_sum = 0, prod = 1;
  for (std::size_t i = 0; i < j; ++i) {
    double tp = cm(i, i), fn = 0, fp = 0;
    for (std::size_t k = 0; k < j; ++k) {
      if (k == i) continue;
      fn += cm(i, k);
      fp += cm(k, i);
    }
    const double tn = total - tp - fn - fp;
    const double sen = tp + fn > 0 ? tp / (tp + fn) : 0;
    const double spe = fp + tn > 0 ? tn / (fp + tn) : 0;
    const double pre = tp + fp > 0 ? tp / (tp + fp) : 0;
    sen_sum += sen;
    spe_sum += spe;
    pre_sum += pre;
    f_sum += pre + sen > 0 ? 2 * pre * sen / (pre + sen) : 0;
    prod *= sen;
  }
  const double n = static_cast<double>(j);
  return {100 * trace / total,        100 * spe_sum / n, 100 * sen_sum / n, 100 * pre_sum / n,
          100 * std::pow(prod, 1 / n), 100 * sen_sum / n, 100 * f_sum / n};
}

}  // namespace

TEST_CASE("perfect classifier scores 100 everywhere") {
  const auto r = compute_metrics(from_rows({{50, 0}, {0, 50}}));
  for (double v : aggregates(r)) CHECK(v == doctest::Approx(100));
  CHECK(r.flags == 0);
}

TEST_CASE("two-class hand example") {
  const auto r = compute_metrics(from_rows({{40, 10}, {20, 30}}));
  CHECK(r.accuracy == doctest::Approx(70));
  CHECK(r.mava == doctest::Approx(70));
  CHECK(std::abs(r.mavg - 100 * std::sqrt(0.48)) < 1e-9);
  CHECK(std::abs(r.mavg - 69.28) < 0.01);
  REQUIRE(r.per_class.size() == 2);
  CHECK(r.per_class[0].sensitivity == doctest::Approx(0.8));
  CHECK(r.per_class[1].sensitivity == doctest::Approx(0.6));
  CHECK(r.per_class[0].precision == doctest::Approx(40.0 / 60));
  CHECK(r.per_class[1].precision == doctest::Approx(30.0 / 40));
  const double f0 = 2 * (2.0 / 3) * 0.8 / (2.0 / 3 + 0.8);
  const double f1 = 2 * 0.75 * 0.6 / (0.75 + 0.6);
  CHECK(r.mfm == doctest::Approx(100 * (f0 + f1) / 2));
  CHECK(r.per_class[0].specificity == doctest::Approx(0.6));
}

TEST_CASE("a class with no true positives zeroes MAvG") {
  const auto r = compute_metrics(from_rows({{5, 1, 0}, {3, 0, 2}, {0, 0, 9}}));
  CHECK(r.mavg == 0);
  CHECK(r.mava > 0);
}

TEST_CASE("undefined ratios are zero and flagged") {
  const auto r = compute_metrics(from_rows({{4, 0, 0}, {2, 0, 0}, {0, 0, 0}}));
  CHECK((r.flags & kPrecisionUndefined) != 0);
  CHECK((r.flags & kSensitivityUndefined) != 0);
  CHECK(r.per_class[1].precision == 0);
  CHECK(r.per_class[2].sensitivity == 0);
  CHECK(r.per_class[1].f1 == 0);
}

TEST_CASE("matches counting oracle and stays in range") {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 10000; ++it) {
    const std::size_t j = 2 + rng() % 6;
    const auto cm = random_matrix(rng, j, it % 3 == 0 ? 3 : 60);
    const auto r = compute_metrics(cm);
    const auto got = aggregates(r);
    const auto want = oracle(cm);
    for (std::size_t k = 0; k < got.size(); ++k) {
      CHECK(std::abs(got[k] - want[k]) <= 1e-9);
      CHECK(got[k] >= 0);
      CHECK(got[k] <= 100 + 1e-12);
    }
    CHECK(r.mavg <= r.mava + 1e-9);
  }
}

TEST_CASE("AM-GM equality when sensitivities agree") {
  const auto r = compute_metrics(from_rows({{8, 2, 0}, {1, 8, 1}, {0, 2, 8}}));
  CHECK(r.mavg == doctest::Approx(r.mava).epsilon(1e-12));
  CHECK(r.mava == doctest::Approx(80));
}

TEST_CASE("class permutation leaves aggregates unchanged") {
  std::mt19937_64 rng(22);
  for (int it = 0; it < 500; ++it) {
    const std::size_t j = 2 + rng() % 5;
    const auto cm = random_matrix(rng, j, 30);
    std::vector<std::size_t> perm(j);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    ConfusionMatrix p(j);
    for (std::size_t a = 0; a < j; ++a) {
      for (std::size_t b = 0; b < j; ++b) p.add(perm[a], perm[b], cm(a, b));
    }
    const auto ra = compute_metrics(cm);
    const auto rb = compute_metrics(p);
    const auto a = aggregates(ra), b = aggregates(rb);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-9);
    for (std::size_t c = 0; c < j; ++c) {
      CHECK(ra.per_class[c].sensitivity == rb.per_class[perm[c]].sensitivity);
      CHECK(ra.per_class[c].precision == rb.per_class[perm[c]].precision);
    }
  }
}

TEST_CASE("two classes: macro sensitivity equals MAvA") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 500; ++it) {
    const auto r = compute_metrics(random_matrix(rng, 2, 40));
    const double mean = 100 * (r.per_class[0].sensitivity + r.per_class[1].sensitivity) / 2;
    CHECK(std::abs(r.macro_sensitivity - mean) <= 1e-9);
    CHECK(std::abs(r.macro_sensitivity - r.mava) <= 1e-9);
  }
}

TEST_CASE("scaling counts leaves metrics unchanged") {
  std::mt19937_64 rng(24);
  for (int it = 0; it < 500; ++it) {
    const std::size_t j = 2 + rng() % 5;
    const auto cm = random_matrix(rng, j, 20);
    const std::uint64_t s = 2 + rng() % 50;
    ConfusionMatrix scaled(j);
    for (std::size_t a = 0; a < j; ++a) {
      for (std::size_t b = 0; b < j; ++b) scaled.add(a, b, cm(a, b) * s);
    }
    const auto a = aggregates(compute_metrics(cm)), b = aggregates(compute_metrics(scaled));
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-9);
  }
}

TEST_CASE("confusion from predictions") {
  const std::vector<int> y = {0, 1, 2, 2, 1};
  const auto diag = confusion_from_predictions(y, y, 3);
  CHECK(diag(0, 0) == 1);
  CHECK(diag(1, 1) == 2);
  CHECK(diag(2, 2) == 2);
  CHECK(diag.trace() == diag.total());

  const std::vector<int> t1 = {2}, p1 = {0};
  const auto lone = confusion_from_predictions(t1, p1, 3);
  CHECK(lone(2, 0) == 1);
  CHECK(lone.total() == 1);

  std::mt19937_64 rng(25);
  std::vector<int> truth(1000), pred(1000);
  std::array<std::uint64_t, 5> counts{};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    truth[i] = static_cast<int>(rng() % 5);
    pred[i] = static_cast<int>(rng() % 5);
    ++counts[static_cast<std::size_t>(truth[i])];
  }
  const auto cm = confusion_from_predictions(truth, pred, 5);
  for (std::size_t c = 0; c < 5; ++c) CHECK(cm.row_sum(c) == counts[c]);
  CHECK(cm.total() == 1000);
}

TEST_CASE("matrix addition") {
  auto a = from_rows({{1, 2}, {3, 4}});
  a += from_rows({{10, 0}, {0, 10}});
  CHECK(a == from_rows({{11, 2}, {3, 14}}));
  ConfusionMatrix three(3);
  CHECK_THROWS_AS(a += three, Error);
}

TEST_CASE("errors") {
  const std::vector<int> a = {0, 1}, b = {0};
  try {
    (void)confusion_from_predictions(a, b, 2);
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LengthMismatch);
  }
  const std::vector<int> empty;
  CHECK_THROWS_AS(confusion_from_predictions(empty, empty, 2), Error);
  const std::vector<int> bad = {0, 3};
  CHECK_THROWS_AS(confusion_from_predictions(a, bad, 2), Error);
  try {
    (void)compute_metrics(ConfusionMatrix(3));
    FAIL("expected EmptyMatrix");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyMatrix);
  }
}
