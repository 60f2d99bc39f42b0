#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pcc {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

using ClassId = int;
using Label = std::optional<ClassId>;
using LabelVector = std::vector<Label>;

/// Per-item feature vectors keyed by stable item ids.
///
/// Rows of `values` correspond one-to-one with `ids`. Construction through
/// `FeatureMatrix::make` checks id uniqueness and finiteness.
struct FeatureMatrix {
  std::vector<std::string> ids;
  Matrix values;

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(values.cols()); }

  static FeatureMatrix make(std::vector<std::string> ids, Matrix values);
};

struct LabeledDataset {
  FeatureMatrix features;
  LabelVector labels;
  std::vector<std::string> classes;

  std::size_t size() const { return features.rows(); }
  std::size_t class_count() const { return classes.size(); }
  std::size_t labeled_count() const;

  // Throws std::invalid_argument if labels are out of range or mis-sized.
  void validate() const;
};

// Builds a dataset from raw label strings; empty string means unlabeled.
// The class dictionary is the lexicographically sorted set of distinct labels.
LabeledDataset make_dataset(FeatureMatrix features, const std::vector<std::string>& raw_labels);

}  // namespace pcc
