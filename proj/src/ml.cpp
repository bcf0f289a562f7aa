#include "seedlab/ml.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "seedlab/parallel.hpp"
#include "seedlab/random.hpp"

namespace seedlab::ml {

std::string_view to_string(ClassifierKind kind) noexcept {
  switch (kind) {
    case ClassifierKind::Knn: return "knn";
    case ClassifierKind::NaiveBayes: return "naive_bayes";
    case ClassifierKind::RandomForest: return "random_forest";
    case ClassifierKind::Svm: return "svm";
  }
  return "unknown";
}

ClassifierKind parse_classifier(std::string_view name) {
  std::string s(name);
  std::ranges::transform(s, s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "knn") return ClassifierKind::Knn;
  if (s == "nb" || s == "naive_bayes" || s == "naivebayes") return ClassifierKind::NaiveBayes;
  if (s == "rf" || s == "random_forest" || s == "randomforest") return ClassifierKind::RandomForest;
  if (s == "svm") return ClassifierKind::Svm;
  throw Error(ErrorKind::InvalidArgument, "unknown classifier '" + s + "'");
}

void Hyperparameters::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::InvalidArgument, what);
  };
  require(knn_k >= 1, "knn k must be >= 1");
  require(rf_trees >= 1, "forest needs at least one tree");
  require(rf_max_features >= 0, "forest max features must be >= 0");
  require(svm_c > 0.0 && std::isfinite(svm_c), "svm C must be positive");
  require(svm_max_epochs >= 1, "svm epochs must be >= 1");
  require(svm_tolerance > 0.0, "svm tolerance must be positive");
  require(nb_variance_floor > 0.0, "naive Bayes variance floor must be positive");
}

Standardizer Standardizer::identity(std::size_t dims) {
  return {std::vector<double>(dims, 0.0), std::vector<double>(dims, 1.0)};
}

Standardizer Standardizer::fit(const Matrix& X) {
  const std::size_t d = X.cols();
  Standardizer s = identity(d);
  if (X.rows() == 0) return s;
  // Welford keeps the huge sentinel values some descriptors use from overflowing.
  std::vector<double> m2(d, 0.0);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto row = X.row(i);
    const auto n = static_cast<double>(i + 1);
    for (std::size_t j = 0; j < d; ++j) {
      const double delta = row[j] - s.mean[j];
      s.mean[j] += delta / n;
      m2[j] += delta * (row[j] - s.mean[j]);
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(m2[j] / static_cast<double>(X.rows()));
    s.scale[j] = (sd > 0.0 && std::isfinite(sd)) ? sd : 1.0;
  }
  return s;
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
  std::vector<double> z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mean[j]) / scale[j];
  return z;
}

int argmax(std::span<const double> scores) {
  return static_cast<int>(std::distance(scores.begin(), std::max_element(scores.begin(), scores.end())));
}

FoldAssignment stratified_kfold(std::span<const int> y, std::size_t classes, std::size_t k,
                                std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> members(classes);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0 || static_cast<std::size_t>(y[i]) >= classes) {
      throw Error(ErrorKind::InvalidArgument, "label outside the class list");
    }
    members[static_cast<std::size_t>(y[i])].push_back(i);
  }
  std::size_t present = 0;
  std::size_t smallest = y.size();
  for (const auto& m : members) {
    if (m.empty()) continue;
    ++present;
    smallest = std::min(smallest, m.size());
  }
  if (present < 2) throw Error(ErrorKind::SingleClassDataset, "stratification needs two classes");
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "cross-validation needs k >= 2");

  FoldAssignment out;
  if (smallest < k) {
    out.warning = "smallest class has " + std::to_string(smallest) + " samples; k lowered from " +
                  std::to_string(k) + " to " + std::to_string(smallest);
    k = smallest;
  }
  if (k < 2) {
    throw Error(ErrorKind::InvalidArgument, "a class with a single sample cannot be cross-validated");
  }

  Rng rng(seed);
  out.folds.assign(k, {});
  std::size_t next = 0;
  for (auto& m : members) {
    rng.shuffle(std::span<std::size_t>(m));
    for (const auto i : m) {
      out.folds[next].push_back(i);
      next = (next + 1) % k;
    }
  }
  for (auto& f : out.folds) std::ranges::sort(f);
  return out;
}

double macro_ovr_auc(const Matrix& scores, std::span<const int> y) {
  const std::size_t n = scores.rows();
  if (y.size() != n) throw Error(ErrorKind::LengthMismatch, "scores and labels differ in length");

  std::vector<std::size_t> order(n);
  std::vector<long long> twice_rank(n);
  double sum = 0.0;
  std::size_t evaluated = 0;
  for (std::size_t c = 0; c < scores.cols(); ++c) {
    std::size_t pos = 0;
    for (const int label : y) pos += static_cast<std::size_t>(label) == c ? 1 : 0;
    const std::size_t neg = n - pos;
    if (pos == 0 || neg == 0) continue;

    std::iota(order.begin(), order.end(), 0);
    std::ranges::sort(order, [&](std::size_t a, std::size_t b) { return scores(a, c) < scores(b, c); });
    // Midranks, doubled to stay integral: ranks i+1..j share (i+1+j).
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i + 1;
      while (j < n && scores(order[j], c) == scores(order[i], c)) ++j;
      for (std::size_t t = i; t < j; ++t) twice_rank[order[t]] = static_cast<long long>(i + 1 + j);
      i = j;
    }
    long long twice_rank_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (static_cast<std::size_t>(y[i]) == c) twice_rank_sum += twice_rank[i];
    }
    const auto p = static_cast<long long>(pos);
    const long long twice_u = twice_rank_sum - p * (p + 1);
    sum += static_cast<double>(twice_u) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
    ++evaluated;
  }
  if (evaluated == 0) throw Error(ErrorKind::UndefinedAuc, "no class has both positives and negatives");
  return sum / static_cast<double>(evaluated);
}

CvReport cross_validate(ClassifierKind kind, const LabeledDataset& ds, const Hyperparameters& hp,
                        std::size_t k, std::uint64_t seed, int jobs) {
  hp.validate();
  ds.validate();
  const auto assignment = stratified_kfold(ds.y, ds.num_classes(), k, seed);
  const std::size_t folds = assignment.folds.size();
  const std::size_t J = ds.num_classes();

  struct FoldOutput {
    std::optional<TrainedModel> model;
    std::vector<int> predicted;
    Matrix scores;
    std::optional<double> auc;
  };
  std::vector<FoldOutput> outputs(folds);

  parallel_for(folds, jobs, [&](std::size_t f) {
    const auto& test = assignment.folds[f];
    std::vector<std::size_t> train_rows;
    train_rows.reserve(ds.size() - test.size());
    for (std::size_t g = 0; g < folds; ++g) {
      if (g != f) train_rows.insert(train_rows.end(), assignment.folds[g].begin(), assignment.folds[g].end());
    }
    std::ranges::sort(train_rows);

    FoldOutput out;
    out.model = train(kind, ds.subset(train_rows), hp, seed + f, 1);
    out.scores = Matrix(test.size(), J);
    std::vector<int> truth;
    for (std::size_t i = 0; i < test.size(); ++i) {
      const auto x = ds.X.row(test[i]);
      const auto s = out.model->predict_scores(x);
      std::copy(s.begin(), s.end(), out.scores.row(i).begin());
      out.predicted.push_back(out.model->predict(x));
      truth.push_back(ds.y[test[i]]);
    }
    try {
      out.auc = macro_ovr_auc(out.scores, truth);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UndefinedAuc) throw;
    }
    outputs[f] = std::move(out);
  });

  CvReport report{{}, metrics::ConfusionMatrix(J), 0, std::vector<int>(ds.size(), -1),
                  Matrix(ds.size(), J), assignment.warning, std::nullopt};
  std::optional<double> best_auc;
  for (std::size_t f = 0; f < folds; ++f) {
    const auto& test = assignment.folds[f];
    FoldResult fr{metrics::ConfusionMatrix(J), outputs[f].auc, test};
    for (std::size_t i = 0; i < test.size(); ++i) {
      fr.confusion.add(static_cast<std::size_t>(ds.y[test[i]]),
                       static_cast<std::size_t>(outputs[f].predicted[i]));
      report.predictions[test[i]] = outputs[f].predicted[i];
      const auto s = outputs[f].scores.row(i);
      std::copy(s.begin(), s.end(), report.scores.row(test[i]).begin());
    }
    report.pooled += fr.confusion;
    if (fr.auc && (!best_auc || *fr.auc > *best_auc)) {
      best_auc = fr.auc;
      report.selected_fold = f;
    }
    report.per_fold.push_back(std::move(fr));
  }
  report.selected_model = std::move(outputs[report.selected_fold].model);
  return report;
}

}  // namespace seedlab::ml
