#include "pcc/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "pcc/rng.hpp"

namespace pcc {
namespace {

std::string item_id(std::size_t i, std::size_t n) {
  const auto width = std::to_string(n > 0 ? n - 1 : 0).size();
  return fmt::format("s{:0{}}", i, width);
}

// Zero-padded so lexicographic order matches class index.
std::string class_name(const char* stem, std::size_t c, std::size_t classes) {
  const auto width = std::to_string(classes - 1).size();
  return fmt::format("{}{:0{}}", stem, c, width);
}

}  // namespace

Matrix blob_centers(std::size_t classes, std::size_t dim, double separation, double sigma) {
  if (classes < 2) throw std::invalid_argument("blobs: need at least 2 classes");
  if (dim < 1) throw std::invalid_argument("blobs: dim must be >= 1");
  if (dim < classes - 1)
    throw std::invalid_argument(fmt::format("blobs: {} separated centers need dim >= {}, got {}", classes,
                                            classes - 1, dim));
  if (!(sigma > 0.0) || !(separation >= 0.0)) throw std::invalid_argument("blobs: sigma must be > 0, separation >= 0");

  // Helmert rows map the standard basis of R^C onto a regular simplex in
  // R^(C-1) with edge sqrt(2).
  Matrix centers = Matrix::Zero(static_cast<Eigen::Index>(classes), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 1; r < classes; ++r) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(r * (r + 1)));
    for (std::size_t c = 0; c < r; ++c) centers(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r - 1)) = scale;
    centers(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r - 1)) = -static_cast<double>(r) * scale;
  }
  return centers * (separation * sigma / std::numbers::sqrt2);
}

LabeledDataset gen_blobs(std::size_t n, std::size_t classes, std::size_t dim, double separation,
                         double sigma, std::uint64_t seed) {
  if (n < classes) throw std::invalid_argument("blobs: need n >= classes");
  const Matrix centers = blob_centers(classes, dim, separation, sigma);

  Rng rng(seed);
  Matrix values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  std::vector<std::string> ids(n);
  std::vector<std::string> labels(n);
  std::size_t row = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    const std::size_t size = n / classes + (c < n % classes ? 1 : 0);
    const std::string name = class_name("blob", c, classes);
    for (std::size_t m = 0; m < size; ++m, ++row) {
      for (std::size_t j = 0; j < dim; ++j)
        values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) =
            centers(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) + sigma * rng.normal();
      ids[row] = item_id(row, n);
      labels[row] = name;
    }
  }
  return make_dataset(FeatureMatrix::make(std::move(ids), std::move(values)), labels);
}

LabeledDataset gen_moons(std::size_t n, double noise, std::uint64_t seed) {
  if (n < 4) throw std::invalid_argument("moons: need n >= 4");
  if (!(noise >= 0.0)) throw std::invalid_argument("moons: noise must be >= 0");
  const std::size_t upper = (n + 1) / 2;
  const std::size_t lower = n - upper;

  Rng rng(seed);
  Matrix values(static_cast<Eigen::Index>(n), 2);
  std::vector<std::string> ids(n);
  std::vector<std::string> labels(n);
  auto angle = [](std::size_t i, std::size_t count) {
    return count > 1 ? std::numbers::pi * static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
  };
  for (std::size_t i = 0; i < n; ++i) {
    double x, y;
    if (i < upper) {
      const double t = angle(i, upper);
      x = std::cos(t);
      y = std::sin(t);
      labels[i] = "moon0";
    } else {
      const double t = angle(i - upper, lower);
      x = 1.0 - std::cos(t);
      y = 0.5 - std::sin(t);
      labels[i] = "moon1";
    }
    values(static_cast<Eigen::Index>(i), 0) = x + noise * rng.normal();
    values(static_cast<Eigen::Index>(i), 1) = y + noise * rng.normal();
    ids[i] = item_id(i, n);
  }
  return make_dataset(FeatureMatrix::make(std::move(ids), std::move(values)), labels);
}

}  // namespace pcc
