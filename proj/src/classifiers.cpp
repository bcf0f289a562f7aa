#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "seedlab/ml.hpp"
#include "seedlab/parallel.hpp"
#include "seedlab/random.hpp"

namespace seedlab::ml {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// ---------------------------------------------------------------------------
// k-nearest neighbours

KnnModel train_knn(const Matrix& Z, const std::vector<int>& y, int k) {
  return KnnModel{k, Z, y};
}

std::vector<double> knn_scores(const KnnModel& m, std::span<const double> z, std::size_t classes) {
  const std::size_t n = m.X.rows();
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = m.X.row(i);
    double d = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) d += (row[j] - z[j]) * (row[j] - z[j]);
    dist[i] = {d, i};
  }
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(m.k), n);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<double> scores(classes, 0.0);
  for (std::size_t i = 0; i < k; ++i) scores[m.y[dist[i].second]] += 1.0;
  for (auto& s : scores) s /= static_cast<double>(k);
  return scores;
}

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

NaiveBayesModel train_naive_bayes(const LabeledDataset& ds, double floor_rel) {
  const std::size_t J = ds.num_classes();
  const std::size_t d = ds.dims();
  const std::size_t n = ds.size();
  NaiveBayesModel m{std::vector<double>(J), Matrix(J, d), Matrix(J, d)};

  const auto counts = ds.class_counts();
  for (std::size_t c = 0; c < J; ++c) {
    m.log_prior[c] = std::log((static_cast<double>(counts[c]) + 1.0) /
                              (static_cast<double>(n) + static_cast<double>(J)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = ds.X.row(i);
    for (std::size_t j = 0; j < d; ++j) m.mean(ds.y[i], j) += row[j];
  }
  for (std::size_t c = 0; c < J; ++c) {
    for (std::size_t j = 0; j < d; ++j) {
      if (counts[c] > 0) m.mean(c, j) /= static_cast<double>(counts[c]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = ds.X.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = row[j] - m.mean(ds.y[i], j);
      m.variance(ds.y[i], j) += diff * diff;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
      lo = std::min(lo, ds.X(i, j));
      hi = std::max(hi, ds.X(i, j));
    }
    const double range = hi - lo;
    // An absolute floor keeps constant features finite; they cancel across classes.
    const double floor = std::max(floor_rel * range * range, 1e-12);
    for (std::size_t c = 0; c < J; ++c) {
      const double v = counts[c] > 0 ? m.variance(c, j) / static_cast<double>(counts[c]) : 0.0;
      m.variance(c, j) = std::max(v, floor);
    }
  }
  return m;
}

std::vector<double> naive_bayes_scores(const NaiveBayesModel& m, std::span<const double> x) {
  const std::size_t J = m.log_prior.size();
  std::vector<double> log_post(J);
  for (std::size_t c = 0; c < J; ++c) {
    double lp = m.log_prior[c];
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double var = m.variance(c, j);
      const double diff = x[j] - m.mean(c, j);
      lp -= 0.5 * (std::log(2.0 * std::numbers::pi * var) + diff * diff / var);
    }
    log_post[c] = lp;
  }
  const double top = *std::max_element(log_post.begin(), log_post.end());
  double total = 0.0;
  for (auto& v : log_post) {
    v = std::exp(v - top);
    total += v;
  }
  for (auto& v : log_post) v /= total;
  return log_post;
}

// ---------------------------------------------------------------------------
// Random forest

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = std::numeric_limits<double>::infinity();
};

double gini(std::span<const std::size_t> counts, std::size_t total) {
  if (total == 0) return 0.0;
  double s = 0.0;
  for (const auto c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    s += p * p;
  }
  return 1.0 - s;
}

class TreeBuilder {
 public:
  TreeBuilder(const LabeledDataset& ds, std::size_t max_features, Rng rng)
      : ds_(ds), classes_(ds.num_classes()), max_features_(max_features), rng_(std::move(rng)) {}

  DecisionTree build() {
    const std::size_t n = ds_.size();
    std::vector<std::size_t> sample(n);
    for (auto& s : sample) s = static_cast<std::size_t>(rng_.below(n));

    DecisionTree tree;
    struct Work {
      int node;
      std::vector<std::size_t> rows;
    };
    std::vector<Work> stack;
    tree.nodes.emplace_back();
    stack.push_back({0, std::move(sample)});
    while (!stack.empty()) {
      Work w = std::move(stack.back());
      stack.pop_back();

      const auto counts = class_counts(w.rows);
      tree.nodes[w.node].label = static_cast<int>(
          std::distance(counts.begin(), std::max_element(counts.begin(), counts.end())));
      const bool pure = std::count_if(counts.begin(), counts.end(),
                                      [](std::size_t c) { return c > 0; }) <= 1;
      if (pure) continue;

      const Split split = best_split(w.rows);
      if (split.feature < 0) continue;  // identical feature vectors with mixed labels

      std::vector<std::size_t> left, right;
      for (const auto r : w.rows) {
        (ds_.X(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right)
            .push_back(r);
      }
      const int l = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      TreeNode& node = tree.nodes[w.node];
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.left = l;
      node.right = l + 1;
      stack.push_back({l + 1, std::move(right)});
      stack.push_back({l, std::move(left)});
    }
    return tree;
  }

 private:
  std::vector<std::size_t> class_counts(std::span<const std::size_t> rows) const {
    std::vector<std::size_t> counts(classes_, 0);
    for (const auto r : rows) ++counts[ds_.y[r]];
    return counts;
  }

  // Draws max_features candidates; keeps drawing past that budget until some
  // feature separates the node.
  Split best_split(std::span<const std::size_t> rows) {
    const std::size_t d = ds_.dims();
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);

    Split best;
    std::vector<std::pair<double, int>> values(rows.size());
    std::vector<std::size_t> left(classes_), right(classes_);
    for (std::size_t tried = 0; tried < d; ++tried) {
      if (tried >= max_features_ && best.feature >= 0) break;
      const auto pick = tried + static_cast<std::size_t>(rng_.below(d - tried));
      std::swap(order[tried], order[pick]);
      const std::size_t f = order[tried];

      for (std::size_t i = 0; i < rows.size(); ++i) {
        values[i] = {ds_.X(rows[i], f), ds_.y[rows[i]]};
      }
      std::sort(values.begin(), values.end());
      if (values.front().first == values.back().first) continue;

      std::fill(left.begin(), left.end(), 0);
      std::fill(right.begin(), right.end(), 0);
      for (const auto& v : values) ++right[v.second];
      const std::size_t total = values.size();
      for (std::size_t i = 0; i + 1 < total; ++i) {
        ++left[values[i].second];
        --right[values[i].second];
        if (values[i].first == values[i + 1].first) continue;
        const std::size_t nl = i + 1;
        const std::size_t nr = total - nl;
        const double impurity =
            (static_cast<double>(nl) * gini(left, nl) + static_cast<double>(nr) * gini(right, nr)) /
            static_cast<double>(total);
        if (impurity < best.impurity) {
          double threshold = values[i].first + (values[i + 1].first - values[i].first) / 2.0;
          if (!(threshold < values[i + 1].first)) threshold = values[i].first;
          best = {static_cast<int>(f), threshold, impurity};
        }
      }
    }
    return best;
  }

  const LabeledDataset& ds_;
  std::size_t classes_;
  std::size_t max_features_;
  Rng rng_;
};

ForestModel train_forest(const LabeledDataset& ds, const Hyperparameters& hp, std::uint64_t seed,
                         int jobs) {
  const std::size_t d = ds.dims();
  const std::size_t max_features =
      hp.rf_max_features > 0
          ? std::min<std::size_t>(static_cast<std::size_t>(hp.rf_max_features), d)
          : std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(double(d)))));
  ForestModel forest;
  forest.trees.resize(static_cast<std::size_t>(hp.rf_trees));
  parallel_for(forest.trees.size(), jobs, [&](std::size_t t) {
    forest.trees[t] = TreeBuilder(ds, max_features, Rng::stream(seed, t)).build();
  });
  return forest;
}

std::vector<double> forest_scores(const ForestModel& m, std::span<const double> x,
                                  std::size_t classes) {
  std::vector<double> votes(classes, 0.0);
  for (const auto& tree : m.trees) votes[tree.predict(x)] += 1.0;
  for (auto& v : votes) v /= static_cast<double>(m.trees.size());
  return votes;
}

// ---------------------------------------------------------------------------
// Linear SVM, one-vs-one, L1-loss dual coordinate descent with a bias column

SvmMachine train_binary_svm(const Matrix& Z, std::span<const std::size_t> rows,
                            std::span<const double> target, const Hyperparameters& hp, Rng rng,
                            int positive, int negative) {
  const std::size_t d = Z.cols();
  const std::size_t n = rows.size();
  std::vector<double> w(d + 1, 0.0);  // last entry is the bias weight
  std::vector<double> alpha(n, 0.0);
  std::vector<double> qdiag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = Z.row(rows[i]);
    qdiag[i] = std::inner_product(x.begin(), x.end(), x.begin(), 1.0);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const double C = hp.svm_c;

  for (int epoch = 0; epoch < hp.svm_max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    for (const std::size_t i : order) {
      const auto x = Z.row(rows[i]);
      const double yi = target[i];
      const double margin = std::inner_product(x.begin(), x.end(), w.begin(), w[d]);
      const double G = yi * margin - 1.0;
      double PG = G;
      if (alpha[i] == 0.0) {
        PG = std::min(G, 0.0);
      } else if (alpha[i] == C) {
        PG = std::max(G, 0.0);
      }
      pg_max = std::max(pg_max, PG);
      pg_min = std::min(pg_min, PG);
      if (std::abs(PG) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::clamp(old - G / qdiag[i], 0.0, C);
        const double delta = (alpha[i] - old) * yi;
        for (std::size_t j = 0; j < d; ++j) w[j] += delta * x[j];
        w[d] += delta;
      }
    }
    if (pg_max - pg_min < hp.svm_tolerance) break;
  }
  SvmMachine m;
  m.positive = positive;
  m.negative = negative;
  m.bias = w[d];
  w.pop_back();
  m.w = std::move(w);
  return m;
}

SvmModel train_svm(const Matrix& Z, const std::vector<int>& y, std::size_t classes,
                   const Hyperparameters& hp, std::uint64_t seed, int jobs) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < static_cast<int>(classes); ++a) {
    for (int b = a + 1; b < static_cast<int>(classes); ++b) pairs.emplace_back(a, b);
  }
  SvmModel model;
  model.machines.resize(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t p) {
    const auto [a, b] = pairs[p];
    std::vector<std::size_t> rows;
    std::vector<double> target;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == a || y[i] == b) {
        rows.push_back(i);
        target.push_back(y[i] == a ? 1.0 : -1.0);
      }
    }
    if (rows.empty()) {
      model.machines[p] = SvmMachine{a, b, std::vector<double>(Z.cols(), 0.0), 0.0};
      return;
    }
    model.machines[p] = train_binary_svm(Z, rows, target, hp, Rng::stream(seed, p), a, b);
  });
  return model;
}

struct SvmVotes {
  std::vector<double> votes;
  std::vector<double> margin_sum;
};

SvmVotes svm_votes(const SvmModel& m, std::span<const double> z, std::size_t classes) {
  SvmVotes v{std::vector<double>(classes, 0.0), std::vector<double>(classes, 0.0)};
  for (const auto& machine : m.machines) {
    const double margin =
        std::inner_product(z.begin(), z.end(), machine.w.begin(), machine.bias);
    v.votes[static_cast<std::size_t>(margin >= 0.0 ? machine.positive : machine.negative)] += 1.0;
    v.margin_sum[static_cast<std::size_t>(machine.positive)] += margin;
    v.margin_sum[static_cast<std::size_t>(machine.negative)] -= margin;
  }
  return v;
}

}  // namespace

int DecisionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                       : n.right);
  }
  return nodes[i].label;
}

TrainedModel::TrainedModel(ClassifierKind kind, Hyperparameters hp, Standardizer standardizer,
                           ModelPayload payload, std::vector<std::string> class_names,
                           std::vector<std::string> feature_names)
    : kind_(kind),
      hp_(hp),
      standardizer_(std::move(standardizer)),
      payload_(std::move(payload)),
      class_names_(std::move(class_names)),
      feature_names_(std::move(feature_names)) {
  if (standardizer_.mean.size() != feature_names_.size() ||
      standardizer_.scale.size() != feature_names_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "standardizer does not match the feature count");
  }
  if (class_names_.size() < 2) {
    throw Error(ErrorKind::SingleClassDataset, "a model needs at least two classes");
  }
}

std::vector<double> TrainedModel::predict_scores(std::span<const double> x) const {
  if (x.size() != dims()) {
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(dims()) +
                                                  " features, got " + std::to_string(x.size()));
  }
  const std::size_t J = num_classes();
  return std::visit(
      overloaded{
          [&](const KnnModel& m) { return knn_scores(m, standardizer_.apply(x), J); },
          [&](const NaiveBayesModel& m) { return naive_bayes_scores(m, x); },
          [&](const ForestModel& m) { return forest_scores(m, x, J); },
          [&](const SvmModel& m) {
            auto v = svm_votes(m, standardizer_.apply(x), J);
            const auto machines = static_cast<double>(m.machines.size());
            for (auto& s : v.votes) s /= machines;
            return v.votes;
          },
      },
      payload_);
}

int TrainedModel::predict(std::span<const double> x) const {
  if (const auto* svm = std::get_if<SvmModel>(&payload_)) {
    if (x.size() != dims()) {
      throw Error(ErrorKind::DimensionMismatch, "feature count mismatch");
    }
    const auto v = svm_votes(*svm, standardizer_.apply(x), num_classes());
    int best = 0;
    for (std::size_t c = 1; c < v.votes.size(); ++c) {
      const auto b = static_cast<std::size_t>(best);
      if (v.votes[c] > v.votes[b] ||
          (v.votes[c] == v.votes[b] && v.margin_sum[c] > v.margin_sum[b])) {
        best = static_cast<int>(c);
      }
    }
    return best;
  }
  return argmax(predict_scores(x));
}

TrainedModel train(ClassifierKind kind, const LabeledDataset& ds, const Hyperparameters& hp,
                   std::uint64_t seed, int jobs) {
  hp.validate();
  ds.validate();
  const std::size_t J = ds.num_classes();

  switch (kind) {
    case ClassifierKind::Knn:
    case ClassifierKind::Svm: {
      Standardizer st = Standardizer::fit(ds.X);
      Matrix Z(ds.size(), ds.dims());
      for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto z = st.apply(ds.X.row(i));
        std::copy(z.begin(), z.end(), Z.row(i).begin());
      }
      ModelPayload payload = kind == ClassifierKind::Knn
                                 ? ModelPayload(train_knn(Z, ds.y, hp.knn_k))
                                 : ModelPayload(train_svm(Z, ds.y, J, hp, seed, jobs));
      return TrainedModel(kind, hp, std::move(st), std::move(payload), ds.class_names,
                          ds.feature_names);
    }
    case ClassifierKind::NaiveBayes:
      return TrainedModel(kind, hp, Standardizer::identity(ds.dims()),
                          train_naive_bayes(ds, hp.nb_variance_floor), ds.class_names,
                          ds.feature_names);
    case ClassifierKind::RandomForest:
      return TrainedModel(kind, hp, Standardizer::identity(ds.dims()),
                          train_forest(ds, hp, seed, jobs), ds.class_names, ds.feature_names);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown classifier kind");
}

}  // namespace seedlab::ml
