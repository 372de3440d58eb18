#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "circlift/error.hpp"

namespace circlift {

/// Projection of centered points onto their top principal axes. Axis signs
/// are fixed so the largest-magnitude loading of each axis is positive.
inline std::vector<std::vector<double>> pca_project(const std::vector<std::vector<double>>& points,
                                                    std::size_t components = 2) {
  if (points.size() < 2) throw Error(ErrorCode::DegenerateData, "PCA needs at least two points");
  const std::size_t n = points.size(), d = points.front().size();
  Eigen::MatrixXd x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    if (points[i].size() != d) throw Error(ErrorCode::DimensionMismatch, "ragged point cloud");
    for (std::size_t j = 0; j < d; ++j) x(i, j) = points[i][j];
  }
  x.rowwise() -= x.colwise().mean();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double tol = std::max<double>(n, d) * std::numeric_limits<double>::epsilon() * (sigma.size() ? sigma[0] : 0.0);
  if (sigma.size() == 0 || sigma[0] <= 0.0 || sigma[0] <= tol)
    throw Error(ErrorCode::DegenerateData, "point cloud has rank 0");

  std::vector<std::vector<double>> out(n, std::vector<double>(components, 0.0));
  for (std::size_t c = 0; c < components && c < static_cast<std::size_t>(sigma.size()); ++c) {
    if (sigma[c] <= tol) break;
    Eigen::VectorXd axis = svd.matrixV().col(c);
    Eigen::Index big = 0;
    axis.cwiseAbs().maxCoeff(&big);
    if (axis[big] < 0) axis = -axis;
    Eigen::VectorXd proj = x * axis;
    for (std::size_t i = 0; i < n; ++i) out[i][c] = proj[i];
  }
  return out;
}

}  // namespace circlift
