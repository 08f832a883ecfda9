#pragma once

#include <Eigen/Dense>
#include <utility>

namespace selfsim {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// An affine map x -> matrix*x + offset on R^d. The map is a proper
/// contraction when 0 < sigma_min(matrix) <= sigma_max(matrix) < 1; for
/// affine maps the extreme singular values are the exact two-sided Lipschitz
/// constants, no sampling involved.
struct ContractionMap {
  Mat matrix;
  Vec offset;

  ContractionMap() = default;
  ContractionMap(Mat m, Vec t) : matrix(std::move(m)), offset(std::move(t)) {}

  int dimension() const { return static_cast<int>(offset.size()); }

  Vec apply(const Vec& x) const { return matrix * x + offset; }

  /// Composition: this after other, i.e. x -> this(other(x)).
  ContractionMap compose(const ContractionMap& other) const {
    return ContractionMap(matrix * other.matrix, matrix * other.offset + offset);
  }

  /// Largest singular value, the certified upper Lipschitz constant c'.
  double upper_bound() const;
  /// Smallest singular value, the certified lower Lipschitz constant c.
  double lower_bound() const;

  /// True when the linear part is a similarity (scalar times orthogonal),
  /// in which case balls map to balls exactly.
  bool is_similarity(double tol = 1e-12) const;
};

/// (c, c') = (sigma_min, sigma_max) of the linear part. Throws
/// InvalidInputError on a non-square or non-finite matrix. The map is proper
/// iff 0 < c and c' < 1.
std::pair<double, double> contraction_bounds(const ContractionMap& map);

}  // namespace selfsim
