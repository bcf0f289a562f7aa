#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "seedlab/dataset.hpp"
#include "seedlab/metrics.hpp"

namespace seedlab::ml {

enum class ClassifierKind : std::uint8_t { Knn = 0, NaiveBayes = 1, RandomForest = 2, Svm = 3 };

inline constexpr std::array<ClassifierKind, 4> kAllClassifiers = {
    ClassifierKind::Knn, ClassifierKind::NaiveBayes, ClassifierKind::RandomForest,
    ClassifierKind::Svm};

std::string_view to_string(ClassifierKind kind) noexcept;
/// Accepts knn, nb/naive_bayes, rf/random_forest, svm.
ClassifierKind parse_classifier(std::string_view name);

struct Hyperparameters {
  int knn_k = 1;
  int rf_trees = 100;
  int rf_max_features = 0;  // 0: floor(sqrt(d))
  double svm_c = 1.0;
  int svm_max_epochs = 1000;
  double svm_tolerance = 1e-4;
  double nb_variance_floor = 1e-9;  // relative to each feature's squared range

  /// Throws InvalidArgument for out-of-range values.
  void validate() const;
  friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

/// Per-feature z-score transform. A zero-spread feature keeps scale 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer identity(std::size_t dims);
  static Standardizer fit(const Matrix& X);
  std::vector<double> apply(std::span<const double> x) const;

  friend bool operator==(const Standardizer&, const Standardizer&) = default;
};

struct KnnModel {
  int k = 1;
  Matrix X;  // standardised training rows
  std::vector<int> y;
};

struct NaiveBayesModel {
  std::vector<double> log_prior;  // Laplace-smoothed
  Matrix mean;                    // classes x dims
  Matrix variance;                // classes x dims, floored
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // x[feature] <= threshold goes left
  int left = -1;
  int right = -1;
  int label = 0;

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // root at 0
  int predict(std::span<const double> x) const;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
};

struct SvmMachine {
  int positive = 0;  // margin >= 0 votes for this class
  int negative = 1;
  std::vector<double> w;
  double bias = 0.0;
};

struct SvmModel {
  std::vector<SvmMachine> machines;  // pairs (a, b), a < b, lexicographic
};

using ModelPayload = std::variant<KnnModel, NaiveBayesModel, ForestModel, SvmModel>;

class TrainedModel {
 public:
  TrainedModel(ClassifierKind kind, Hyperparameters hp, Standardizer standardizer,
               ModelPayload payload, std::vector<std::string> class_names,
               std::vector<std::string> feature_names);

  ClassifierKind kind() const noexcept { return kind_; }
  const Hyperparameters& hyperparameters() const noexcept { return hp_; }
  const Standardizer& standardizer() const noexcept { return standardizer_; }
  const ModelPayload& payload() const noexcept { return payload_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  std::size_t dims() const noexcept { return feature_names_.size(); }
  std::size_t num_classes() const noexcept { return class_names_.size(); }

  /// Per-class scores summing to 1: kNN neighbour vote fractions, naive
  /// Bayes posteriors, forest tree votes, SVM one-vs-one vote shares.
  /// Throws DimensionMismatch when x has the wrong length.
  std::vector<double> predict_scores(std::span<const double> x) const;

  /// Score argmax with ties to the lowest class index; SVM vote ties are
  /// first broken by the summed pairwise margins.
  int predict(std::span<const double> x) const;

 private:
  ClassifierKind kind_;
  Hyperparameters hp_;
  Standardizer standardizer_;
  ModelPayload payload_;
  std::vector<std::string> class_names_;
  std::vector<std::string> feature_names_;
};

/// Deterministic in (ds, hp, seed); `jobs` only affects wall-clock time.
/// Throws SingleClassDataset or DimensionMismatch on invalid data.
TrainedModel train(ClassifierKind kind, const LabeledDataset& ds, const Hyperparameters& hp,
                   std::uint64_t seed, int jobs = 1);

/// Index of the largest score, lowest index on ties.
int argmax(std::span<const double> scores);

struct FoldAssignment {
  std::vector<std::vector<std::size_t>> folds;  // ascending indices per fold
  std::optional<std::string> warning;           // set when k had to be lowered
};

/// Seeded per-class shuffle followed by a round-robin deal that continues
/// across classes. k drops to the smallest non-empty class size if needed.
FoldAssignment stratified_kfold(std::span<const int> y, std::size_t classes, std::size_t k,
                                std::uint64_t seed);

/// Mann-Whitney AUC of each class column against the rest, averaged over
/// classes that have both positives and negatives. Ties count one half.
/// Throws UndefinedAuc if no class qualifies.
double macro_ovr_auc(const Matrix& scores, std::span<const int> y);

struct FoldResult {
  metrics::ConfusionMatrix confusion;
  std::optional<double> auc;  // absent when the fold leaves no class evaluable
  std::vector<std::size_t> test_rows;
};

struct CvReport {
  std::vector<FoldResult> per_fold;
  metrics::ConfusionMatrix pooled;
  std::size_t selected_fold = 0;
  std::vector<int> predictions;  // out-of-fold prediction per row
  Matrix scores;                 // out-of-fold scores per row
  std::optional<std::string> warning;
  std::optional<TrainedModel> selected_model;
};

/// Stratified k-fold evaluation. Each fold's model (including its
/// standardiser) sees only training rows. The selected fold is the one with
/// the largest AUC, lowest index on ties.
CvReport cross_validate(ClassifierKind kind, const LabeledDataset& ds, const Hyperparameters& hp,
                        std::size_t k, std::uint64_t seed, int jobs = 1);

}  // namespace seedlab::ml
