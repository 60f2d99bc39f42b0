#include "pcc/pca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <spdlog/spdlog.h>

namespace pcc {
namespace {

using ColMatrix = Eigen::MatrixXd;

// Projects `v` off the span of rows [0, count) of `basis` (two MGS passes).
void orthogonalize(Eigen::Ref<Vector> v, const Matrix& basis, Eigen::Index count) {
  for (int pass = 0; pass < 2; ++pass)
    for (Eigen::Index r = 0; r < count; ++r) v -= basis.row(r).dot(v) * basis.row(r).transpose();
}

// Re-orthonormalizes rows in order and fills degenerate rows with unit
// vectors orthogonal to everything before them.
void finish_basis(Matrix& comps, const std::vector<bool>& degenerate) {
  const Eigen::Index d = comps.cols();
  const double accept = 0.5 / static_cast<double>(d);
  for (Eigen::Index r = 0; r < comps.rows(); ++r) {
    Vector v = comps.row(r).transpose();
    if (!degenerate[static_cast<std::size_t>(r)]) {
      orthogonalize(v, comps, r);
      const double norm = v.norm();
      if (norm > 0.5) {
        comps.row(r) = (v / norm).transpose();
        continue;
      }
    }
    // Some standard basis vector keeps squared residual >= 1/d after
    // projecting off fewer than d rows.
    for (Eigen::Index j = 0; j < d; ++j) {
      v.setZero();
      v[j] = 1.0;
      orthogonalize(v, comps, r);
      if (v.squaredNorm() >= accept) break;
    }
    comps.row(r) = v.normalized().transpose();
  }
}

void normalize_signs(Matrix& comps) {
  for (Eigen::Index r = 0; r < comps.rows(); ++r) {
    Eigen::Index arg = 0;
    comps.row(r).cwiseAbs().maxCoeff(&arg);
    if (comps(r, arg) < 0) comps.row(r) *= -1.0;
  }
}

}  // namespace

PcaModel pca_fit(const Matrix& x, std::size_t p_max) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (n < 2) throw std::invalid_argument("pca: need at least 2 rows, got " + std::to_string(n));
  if (d < 1) throw std::invalid_argument("pca: need at least 1 feature column");
  if (p_max < 1) throw std::invalid_argument("pca: p_max must be >= 1");

  const auto cap = static_cast<std::size_t>(std::min(n - 1, d));
  if (p_max > cap) {
    spdlog::warn("pca: requested {} components, clamped to min(n-1, d) = {}", p_max, cap);
    p_max = cap;
  }
  const auto p = static_cast<Eigen::Index>(p_max);

  PcaModel model;
  model.mean = x.colwise().mean().transpose();
  const ColMatrix centered = x.rowwise() - model.mean.transpose();
  const double denom = static_cast<double>(n - 1);

  Vector singular(p);
  model.components.resize(p, d);

  if (d <= n) {
    Eigen::BDCSVD<ColMatrix> svd(centered, Eigen::ComputeThinV);
    singular = svd.singularValues().head(p);
    model.components = svd.matrixV().leftCols(p).transpose();
  } else {
    // Wide data: eigendecompose the n x n Gram matrix and map back.
    const ColMatrix gram = centered * centered.transpose();
    Eigen::SelfAdjointEigenSolver<ColMatrix> eig(gram);
    if (eig.info() != Eigen::Success) throw std::runtime_error("pca: eigendecomposition failed");
    for (Eigen::Index r = 0; r < p; ++r) {
      const Eigen::Index src = n - 1 - r;  // eigenvalues ascend
      const double s = std::sqrt(std::max(eig.eigenvalues()[src], 0.0));
      singular[r] = s;
      if (s > 0) model.components.row(r) = (centered.transpose() * eig.eigenvectors().col(src)).transpose() / s;
    }
  }

  const double smax = singular.size() > 0 ? singular[0] : 0.0;
  const double tol = static_cast<double>(std::max(n, d)) * std::numeric_limits<double>::epsilon() * smax;
  std::vector<bool> degenerate(static_cast<std::size_t>(p));
  model.explained_variance.resize(p);
  for (Eigen::Index r = 0; r < p; ++r) {
    const bool zero = !(singular[r] > tol);
    degenerate[static_cast<std::size_t>(r)] = zero;
    model.explained_variance[r] = zero ? 0.0 : singular[r] * singular[r] / denom;
  }
  // Guard against rounding breaking the descending order.
  for (Eigen::Index r = 1; r < p; ++r)
    model.explained_variance[r] = std::min(model.explained_variance[r], model.explained_variance[r - 1]);

  finish_basis(model.components, degenerate);
  normalize_signs(model.components);
  return model;
}

PcaModel pca_fit(const FeatureMatrix& x, std::size_t p_max) { return pca_fit(x.values, p_max); }

Matrix pca_transform(const PcaModel& model, const Matrix& x, std::size_t p) {
  if (static_cast<std::size_t>(x.cols()) != model.dim())
    throw std::invalid_argument("pca transform: input has " + std::to_string(x.cols()) +
                                " columns, model expects " + std::to_string(model.dim()));
  if (p < 1 || p > model.max_components())
    throw std::invalid_argument("pca transform: p=" + std::to_string(p) + " outside [1, " +
                                std::to_string(model.max_components()) + "]");
  const auto rows = model.components.topRows(static_cast<Eigen::Index>(p));
  return (x.rowwise() - model.mean.transpose()) * rows.transpose();
}

FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& x, std::size_t p) {
  return FeatureMatrix{x.ids, pca_transform(model, x.values, p)};
}

}  // namespace pcc
