#include "seedlab/dataset.hpp"

#include <cmath>

namespace seedlab {

void Matrix::push_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) {
    cols_ = values.size();
  } else if (values.size() != cols_) {
    throw Error(ErrorKind::DimensionMismatch, "row length " + std::to_string(values.size()) +
                                                  " differs from column count " +
                                                  std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

void LabeledDataset::validate() const {
  if (X.rows() != y.size()) {
    throw Error(ErrorKind::DimensionMismatch, "feature rows and labels differ in count");
  }
  if (X.rows() > 0 && X.cols() != feature_names.size()) {
    throw Error(ErrorKind::DimensionMismatch, "feature columns and names differ in count");
  }
  for (const double v : X.data()) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite feature value");
  }
  for (const int label : y) {
    if (label < 0 || static_cast<std::size_t>(label) >= class_names.size()) {
      throw Error(ErrorKind::InvalidArgument, "label outside the class list");
    }
  }
  if (class_names.size() < 2) {
    throw Error(ErrorKind::SingleClassDataset, "at least two classes are required");
  }
  std::size_t present = 0;
  for (const auto c : class_counts()) present += c > 0 ? 1 : 0;
  if (present < 2) {
    throw Error(ErrorKind::SingleClassDataset, "only one class has samples");
  }
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
  LabeledDataset out;
  out.relation = relation;
  out.feature_names = feature_names;
  out.class_names = class_names;
  out.X = Matrix(rows.size(), X.cols());
  out.y.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = X.row(rows[i]);
    std::copy(src.begin(), src.end(), out.X.row(i).begin());
    out.y.push_back(y[rows[i]]);
  }
  return out;
}

LabeledDataset LabeledDataset::select_columns(std::span<const std::size_t> cols) const {
  LabeledDataset out;
  out.relation = relation;
  out.class_names = class_names;
  out.y = y;
  for (const auto c : cols) out.feature_names.push_back(feature_names.at(c));
  out.X = Matrix(X.rows(), cols.size());
  for (std::size_t r = 0; r < X.rows(); ++r) {
    for (std::size_t j = 0; j < cols.size(); ++j) out.X(r, j) = X(r, cols[j]);
  }
  return out;
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(class_names.size(), 0);
  for (const int label : y) {
    if (label >= 0 && static_cast<std::size_t>(label) < counts.size()) ++counts[label];
  }
  return counts;
}

}  // namespace seedlab
