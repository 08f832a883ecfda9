#include "selfsim/contraction.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "selfsim/errors.hpp"

namespace selfsim {

namespace {

std::pair<double, double> singular_range(const Mat& m) {
  if (m.rows() != m.cols()) throw InvalidInputError("contraction matrix must be square");
  if (!m.allFinite()) throw InvalidInputError("contraction matrix has non-finite entries");
  if (m.rows() == 1) {
    double s = std::abs(m(0, 0));
    return {s, s};
  }
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  return {sv(sv.size() - 1), sv(0)};
}

}  // namespace

double ContractionMap::upper_bound() const { return singular_range(matrix).second; }

double ContractionMap::lower_bound() const { return singular_range(matrix).first; }

bool ContractionMap::is_similarity(double tol) const {
  // M^T M = s^2 I  <=>  columns orthogonal with equal norms.
  Mat g = matrix.transpose() * matrix;
  double s2 = g.trace() / static_cast<double>(g.rows());
  Mat dev = g - s2 * Mat::Identity(g.rows(), g.cols());
  return dev.cwiseAbs().maxCoeff() <= tol * std::max(1.0, s2);
}

std::pair<double, double> contraction_bounds(const ContractionMap& map) {
  if (map.offset.size() != map.matrix.rows())
    throw InvalidInputError("contraction offset dimension mismatch");
  if (!map.offset.allFinite()) throw InvalidInputError("contraction offset has non-finite entries");
  return singular_range(map.matrix);
}

}  // namespace selfsim
