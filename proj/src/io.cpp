#include "pcc/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_set>

#include <fmt/format.h>

namespace pcc {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("error reading '" + path.string() + "'");
  return std::move(buf).str();
}

template <typename WriteFn>
void write_file(const std::filesystem::path& path, WriteFn&& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  fn(out);
  out.flush();
  if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
}

// Splits text into lines, dropping a trailing '\r' and a final empty line.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

void split_fields(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

bool parse_double(std::string_view s, double& value) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

template <typename Int>
bool parse_int(std::string_view s, Int& value) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Index of the first non-empty line, or lines.size().
std::size_t first_content_line(const std::vector<std::string_view>& lines) {
  std::size_t i = 0;
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  return i;
}

}  // namespace

FormatError::FormatError(const std::string& file, std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("{}:{}: {}", file, line, what)), line_(line) {}

std::string format_number(double value) { return fmt::format("{:.9g}", value); }

std::string format_cell(double value) {
  std::string s = fmt::format("{:.9f}", value);
  const std::size_t dot = s.find('.');
  while (s.size() > dot + 7 && s.back() == '0') s.pop_back();
  return s;
}

LabeledDataset parse_feature_table(std::string_view text, const std::string& source) {
  const auto lines = split_lines(text);
  const std::size_t head = first_content_line(lines);
  if (head == lines.size()) throw FormatError(source, 1, "empty file, expected header `id,label,f0,...`");

  std::vector<std::string_view> fields;
  split_fields(lines[head], fields);
  if (fields.size() < 3 || fields[0] != "id" || fields[1] != "label")
    throw FormatError(source, head + 1, "malformed header, expected `id,label,f0,...`");
  const std::size_t d = fields.size() - 2;
  for (std::size_t j = 0; j < d; ++j)
    if (fields[j + 2] != "f" + std::to_string(j))
      throw FormatError(source, head + 1,
                        fmt::format("malformed header: column {} is `{}`, expected `f{}`", j + 2, fields[j + 2], j));

  std::vector<std::size_t> rows;
  for (std::size_t i = head + 1; i < lines.size(); ++i)
    if (!trim(lines[i]).empty()) rows.push_back(i);
  if (rows.empty()) throw FormatError(source, head + 1, "no data rows");

  Matrix values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  ids.reserve(rows.size());
  labels.reserve(rows.size());
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t lineno = rows[r] + 1;
    split_fields(lines[rows[r]], fields);
    if (fields.size() != d + 2)
      throw FormatError(source, lineno,
                        fmt::format("row has {} feature values, header declares {}",
                                    fields.size() < 2 ? 0 : fields.size() - 2, d));
    if (fields[0].empty()) throw FormatError(source, lineno, "empty id");
    std::string id(fields[0]);
    if (!seen.insert(id).second) throw FormatError(source, lineno, "duplicate id '" + id + "'");
    for (std::size_t j = 0; j < d; ++j) {
      double v;
      if (!parse_double(fields[j + 2], v))
        throw FormatError(source, lineno, fmt::format("non-numeric value `{}` in column f{}", fields[j + 2], j));
      if (!std::isfinite(v)) throw FormatError(source, lineno, fmt::format("non-finite value in column f{}", j));
      values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = v;
    }
    ids.push_back(std::move(id));
    labels.emplace_back(fields[1]);
  }
  return make_dataset(FeatureMatrix::make(std::move(ids), std::move(values)), labels);
}

LabeledDataset load_feature_table(const std::filesystem::path& path) {
  return parse_feature_table(read_file(path), path.string());
}

void write_feature_table(const LabeledDataset& dataset, std::ostream& out) {
  dataset.validate();
  const std::size_t d = dataset.features.dim();
  out << "id,label";
  for (std::size_t j = 0; j < d; ++j) out << ",f" << j;
  out << '\n';
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out << dataset.features.ids[i] << ',';
    if (dataset.labels[i]) out << dataset.classes[static_cast<std::size_t>(*dataset.labels[i])];
    for (std::size_t j = 0; j < d; ++j)
      out << ',' << format_number(dataset.features.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    out << '\n';
  }
}

void write_feature_table(const LabeledDataset& dataset, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { write_feature_table(dataset, out); });
}

std::map<std::string, std::string> load_label_map(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  const std::string source = path.string();
  const std::size_t head = first_content_line(lines);
  if (head == lines.size()) throw FormatError(source, 1, "empty label file");
  std::vector<std::string_view> fields;
  split_fields(lines[head], fields);
  if (fields.size() != 2 || (fields[0] != "id" && fields[0] != "filename") || fields[1] != "label")
    throw FormatError(source, head + 1, "malformed header, expected `id,label`");
  std::map<std::string, std::string> out;
  for (std::size_t i = head + 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    split_fields(lines[i], fields);
    if (fields.size() != 2) throw FormatError(source, i + 1, "expected 2 fields");
    if (!out.emplace(std::string(fields[0]), std::string(fields[1])).second)
      throw FormatError(source, i + 1, "duplicate id '" + std::string(fields[0]) + "'");
  }
  return out;
}

LabeledDataset relabel(const LabeledDataset& dataset, const std::map<std::string, std::string>& labels) {
  std::vector<std::string> raw(dataset.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (auto it = labels.find(dataset.features.ids[i]); it != labels.end()) raw[i] = it->second;
  return make_dataset(dataset.features, raw);
}

void write_predictions(const LabeledDataset& dataset, const Prediction& prediction, std::ostream& out) {
  const std::size_t n = dataset.size();
  if (prediction.labels.size() != n || static_cast<std::size_t>(prediction.domination.rows()) != n)
    throw std::invalid_argument(fmt::format("predictions: {} predicted rows for a dataset of {} items",
                                            prediction.labels.size(), n));
  const auto c = prediction.domination.cols();
  out << "id,predicted_label";
  for (Eigen::Index j = 0; j < c; ++j) out << ",dom_" << j;
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    out << dataset.features.ids[i] << ',' << prediction.labels[i];
    for (Eigen::Index j = 0; j < c; ++j)
      out << ',' << format_number(prediction.domination(static_cast<Eigen::Index>(i), j));
    out << '\n';
  }
}

void write_predictions(const LabeledDataset& dataset, const Prediction& prediction,
                       const std::filesystem::path& path) {
  // Validate before truncating an existing file.
  if (prediction.labels.size() != dataset.size())
    throw std::invalid_argument(fmt::format("predictions: {} predicted rows for a dataset of {} items",
                                            prediction.labels.size(), dataset.size()));
  write_file(path, [&](std::ostream& out) { write_predictions(dataset, prediction, out); });
}

PredictionTable load_predictions(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const std::string source = path.string();
  const auto lines = split_lines(text);
  const std::size_t head = first_content_line(lines);
  if (head == lines.size()) throw FormatError(source, 1, "empty prediction file");
  std::vector<std::string_view> fields;
  split_fields(lines[head], fields);
  if (fields.size() < 3 || fields[0] != "id" || fields[1] != "predicted_label")
    throw FormatError(source, head + 1, "malformed header, expected `id,predicted_label,dom_0,...`");
  const std::size_t c = fields.size() - 2;
  for (std::size_t j = 0; j < c; ++j)
    if (fields[j + 2] != "dom_" + std::to_string(j))
      throw FormatError(source, head + 1, fmt::format("malformed header: expected `dom_{}`", j));

  PredictionTable t;
  std::vector<double> flat;
  for (std::size_t i = head + 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    split_fields(lines[i], fields);
    if (fields.size() != c + 2) throw FormatError(source, i + 1, "wrong field count");
    ClassId label;
    if (!parse_int(fields[1], label)) throw FormatError(source, i + 1, "non-integer predicted label");
    t.ids.emplace_back(fields[0]);
    t.labels.push_back(label);
    for (std::size_t j = 0; j < c; ++j) {
      double v;
      if (!parse_double(fields[j + 2], v)) throw FormatError(source, i + 1, "non-numeric domination value");
      flat.push_back(v);
    }
  }
  t.domination = Eigen::Map<Matrix>(flat.data(), static_cast<Eigen::Index>(t.ids.size()), static_cast<Eigen::Index>(c));
  return t;
}

Heatmap to_heatmap(const GridResult& grid) {
  Heatmap h;
  for (std::size_t p = grid.p_range.lo; p <= grid.p_range.hi; ++p) h.p_values.push_back(p);
  for (std::size_t k = grid.k_range.lo; k <= grid.k_range.hi; ++k) h.k_values.push_back(k);
  if (grid.cells.size() != h.p_values.size() * h.k_values.size())
    throw std::invalid_argument("heatmap: grid cell count does not match its ranges");
  for (std::size_t p : h.p_values) {
    auto& row = h.cells.emplace_back();
    for (std::size_t k : h.k_values) row.push_back(grid.at(p, k).mean);
  }
  return h;
}

void write_heatmap(const Heatmap& h, std::ostream& out) {
  if (h.p_values.empty() || h.k_values.empty()) throw std::invalid_argument("heatmap: empty grid");
  if (h.cells.size() != h.p_values.size())
    throw std::invalid_argument("heatmap: row count does not match the p values");
  for (const auto& row : h.cells)
    if (row.size() != h.k_values.size()) throw std::invalid_argument("heatmap: ragged grid");

  out << "p\\k";
  for (std::size_t k : h.k_values) out << ',' << k;
  out << '\n';
  for (std::size_t r = 0; r < h.p_values.size(); ++r) {
    out << h.p_values[r];
    for (double v : h.cells[r]) out << ',' << format_cell(v);
    out << '\n';
  }
}

void write_heatmap(const Heatmap& heatmap, const std::filesystem::path& path) {
  std::ostringstream buf;
  write_heatmap(heatmap, buf);
  write_file(path, [&](std::ostream& out) { out << buf.str(); });
}

void write_heatmap(const GridResult& grid, const std::filesystem::path& path) {
  write_heatmap(to_heatmap(grid), path);
}

Heatmap load_heatmap(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const std::string source = path.string();
  const auto lines = split_lines(text);
  const std::size_t head = first_content_line(lines);
  if (head == lines.size()) throw FormatError(source, 1, "empty heatmap file");
  std::vector<std::string_view> fields;
  split_fields(lines[head], fields);
  if (fields.size() < 2 || fields[0] != "p\\k") throw FormatError(source, head + 1, "malformed header, expected `p\\k,...`");

  Heatmap h;
  for (std::size_t j = 1; j < fields.size(); ++j) {
    std::size_t k;
    if (!parse_int(fields[j], k)) throw FormatError(source, head + 1, "non-integer k value");
    h.k_values.push_back(k);
  }
  for (std::size_t i = head + 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    split_fields(lines[i], fields);
    if (fields.size() != h.k_values.size() + 1) throw FormatError(source, i + 1, "ragged heatmap row");
    std::size_t p;
    if (!parse_int(fields[0], p)) throw FormatError(source, i + 1, "non-integer p value");
    h.p_values.push_back(p);
    auto& row = h.cells.emplace_back();
    for (std::size_t j = 1; j < fields.size(); ++j) {
      double v;
      if (!parse_double(fields[j], v)) throw FormatError(source, i + 1, "non-numeric cell");
      row.push_back(v);
    }
  }
  if (h.p_values.empty()) throw FormatError(source, head + 1, "no data rows");
  return h;
}

}  // namespace pcc
