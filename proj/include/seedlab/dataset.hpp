#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "seedlab/error.hpp"

namespace seedlab {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  /// Appends a row; the first row fixes the column count.
  void push_row(std::span<const double> values);

  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Feature matrix with one categorical label per row.
struct LabeledDataset {
  std::string relation = "seeds";
  std::vector<std::string> feature_names;
  Matrix X;
  std::vector<int> y;
  std::vector<std::string> class_names;

  std::size_t size() const noexcept { return y.size(); }
  std::size_t dims() const noexcept { return feature_names.size(); }
  std::size_t num_classes() const noexcept { return class_names.size(); }

  /// Throws DimensionMismatch, InvalidArgument (non-finite cell, bad label)
  /// or SingleClassDataset (fewer than two classes).
  void validate() const;

  /// Rows selected by index, in the given order; names are kept.
  LabeledDataset subset(std::span<const std::size_t> rows) const;

  /// Column subset by index, keeping rows and labels.
  LabeledDataset select_columns(std::span<const std::size_t> cols) const;

  /// Per-class row counts.
  std::vector<std::size_t> class_counts() const;

  friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

}  // namespace seedlab
