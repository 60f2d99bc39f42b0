#include "pcc/dataset.hpp"

#include <algorithm>
#include <unordered_set>

namespace pcc {

FeatureMatrix FeatureMatrix::make(std::vector<std::string> ids, Matrix values) {
  if (ids.size() != static_cast<std::size_t>(values.rows()))
    throw std::invalid_argument("feature matrix: id count " + std::to_string(ids.size()) +
                                " does not match row count " + std::to_string(values.rows()));
  std::unordered_set<std::string> seen;
  seen.reserve(ids.size());
  for (const auto& id : ids)
    if (!seen.insert(id).second) throw std::invalid_argument("feature matrix: duplicate id '" + id + "'");
  if (!values.allFinite()) throw std::invalid_argument("feature matrix: non-finite entry");
  return FeatureMatrix{std::move(ids), std::move(values)};
}

std::size_t LabeledDataset::labeled_count() const {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](const Label& l) { return l.has_value(); }));
}

void LabeledDataset::validate() const {
  if (labels.size() != features.rows())
    throw std::invalid_argument("dataset: label count " + std::to_string(labels.size()) +
                                " does not match item count " + std::to_string(features.rows()));
  const auto c = static_cast<ClassId>(classes.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] && (*labels[i] < 0 || *labels[i] >= c))
      throw std::invalid_argument("dataset: label index " + std::to_string(*labels[i]) + " of item " +
                                  std::to_string(i) + " outside [0, " + std::to_string(c) + ")");
}

LabeledDataset make_dataset(FeatureMatrix features, const std::vector<std::string>& raw_labels) {
  if (raw_labels.size() != features.rows())
    throw std::invalid_argument("dataset: label count does not match item count");
  std::vector<std::string> classes;
  for (const auto& s : raw_labels)
    if (!s.empty()) classes.push_back(s);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  LabelVector labels(raw_labels.size());
  for (std::size_t i = 0; i < raw_labels.size(); ++i) {
    if (raw_labels[i].empty()) continue;
    auto it = std::lower_bound(classes.begin(), classes.end(), raw_labels[i]);
    labels[i] = static_cast<ClassId>(it - classes.begin());
  }
  return LabeledDataset{std::move(features), std::move(labels), std::move(classes)};
}

}  // namespace pcc
