#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pcc/dataset.hpp"
#include "pcc/engine.hpp"
#include "pcc/harness.hpp"

namespace pcc {

/// Malformed input file; carries the 1-based line number of the first offence.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& file, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Feature CSV: header `id,label,f0,...,f{d-1}`, empty label = unlabeled.
LabeledDataset load_feature_table(const std::filesystem::path& path);
LabeledDataset parse_feature_table(std::string_view text, const std::string& source = "<memory>");
void write_feature_table(const LabeledDataset& dataset, const std::filesystem::path& path);
void write_feature_table(const LabeledDataset& dataset, std::ostream& out);

// Label map CSV: header `id,label` (or `filename,label`). Returns id -> label.
std::map<std::string, std::string> load_label_map(const std::filesystem::path& path);

// Replaces every item's label with the mapped one; ids absent from the map
// become unlabeled. The class dictionary is rebuilt.
LabeledDataset relabel(const LabeledDataset& dataset, const std::map<std::string, std::string>& labels);

// Prediction CSV: header `id,predicted_label,dom_0,...,dom_{C-1}`. The
// predicted label column holds the class index.
void write_predictions(const LabeledDataset& dataset, const Prediction& prediction,
                       const std::filesystem::path& path);
void write_predictions(const LabeledDataset& dataset, const Prediction& prediction, std::ostream& out);

struct PredictionTable {
  std::vector<std::string> ids;
  std::vector<ClassId> labels;
  Matrix domination;
};

PredictionTable load_predictions(const std::filesystem::path& path);

/// Rectangular accuracy grid as stored in a heatmap CSV.
struct Heatmap {
  std::vector<std::size_t> p_values;
  std::vector<std::size_t> k_values;
  std::vector<std::vector<double>> cells;  // cells[row for p][column for k]
};

Heatmap to_heatmap(const GridResult& grid);

// Heatmap CSV: header `p\k,k1,...`, one row per p. Cells carry at least six
// decimals and enough digits to round-trip within 1e-9.
void write_heatmap(const GridResult& grid, const std::filesystem::path& path);
void write_heatmap(const Heatmap& heatmap, const std::filesystem::path& path);
void write_heatmap(const Heatmap& heatmap, std::ostream& out);
Heatmap load_heatmap(const std::filesystem::path& path);

// Fixed-point with 9 decimals, trailing zeros trimmed down to 6 decimals.
std::string format_cell(double value);

// 9 significant digits.
std::string format_number(double value);

}  // namespace pcc
