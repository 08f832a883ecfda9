#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "selfsim/cograph.hpp"
#include "selfsim/grid.hpp"

namespace selfsim {

using Complex = std::complex<double>;

/// An element of A = C(K) sampled on the canonical grid: one complex value
/// per grid word. Evaluation away from the grid snaps to the nearest grid
/// point (ties to the lexicographically smallest word).
class SampledFunction {
public:
  SampledFunction() = default;
  SampledFunction(GridPtr grid, Eigen::VectorXcd values);

  static SampledFunction constant(GridPtr grid, Complex value);
  static SampledFunction from_function(GridPtr grid,
                                       const std::function<Complex(const Vec&)>& fn);

  const SampleGrid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  std::uint64_t size() const { return static_cast<std::uint64_t>(values_.size()); }

  Complex at(std::uint64_t word_index) const { return values_[static_cast<long>(word_index)]; }
  Complex& at(std::uint64_t word_index) { return values_[static_cast<long>(word_index)]; }
  Complex eval(const Vec& point) const { return values_[static_cast<long>(grid_->nearest(point))]; }
  const Eigen::VectorXcd& values() const { return values_; }
  Eigen::VectorXcd& values() { return values_; }

  double sup_norm() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }
  double min_real() const;
  bool is_real(double tol = 1e-12) const;

  SampledFunction conjugate() const;
  SampledFunction operator+(const SampledFunction& o) const;
  SampledFunction operator-(const SampledFunction& o) const;
  SampledFunction operator*(const SampledFunction& o) const;  // pointwise
  SampledFunction operator*(Complex s) const;

  /// Entrywise power of a strictly positive real function.
  SampledFunction real_pow(double exponent) const;

private:
  GridPtr grid_;
  Eigen::VectorXcd values_;
};

/// An element of X = C(G) sampled on a cograph sample: one value per
/// (symbol, grid word) key; values agree exactly inside a merge class, which
/// is what separates the union of cographs from their disjoint union.
class CographFunction {
public:
  CographFunction() = default;
  CographFunction(CographSamplePtr sample, Eigen::MatrixXcd values);  // N x G

  static CographFunction constant(CographSamplePtr sample, Complex value);
  /// fn(first coordinate gamma_i(y), y); automatically branch consistent.
  static CographFunction from_function(
      CographSamplePtr sample, const std::function<Complex(const Vec&, const Vec&)>& fn);

  const CographSample& sample() const { return *sample_; }
  CographSamplePtr sample_ptr() const { return sample_; }
  const SampleGrid& grid() const { return sample_->grid(); }
  int symbol_count() const { return static_cast<int>(values_.rows()); }

  Complex at(int symbol, std::uint64_t u) const {
    return values_(symbol - 1, static_cast<long>(u));
  }
  Complex& at(int symbol, std::uint64_t u) {
    return values_(symbol - 1, static_cast<long>(u));
  }
  const Eigen::MatrixXcd& values() const { return values_; }
  Eigen::MatrixXcd& values() { return values_; }

  double sup_norm() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }
  double branch_violation() const;  // max value spread inside a merge class
  void canonicalize();              // copy each class representative's value

  CographFunction operator+(const CographFunction& o) const;
  CographFunction operator-(const CographFunction& o) const;
  CographFunction operator*(Complex s) const;
  CographFunction pointwise_mul(const CographFunction& o) const;

private:
  GridPtr grid_;  // kept for lifetime only
  CographSamplePtr sample_;
  Eigen::MatrixXcd values_;
};

/// (f|g)_A(y) = sum_i conj(f(gamma_i(y), y)) g(gamma_i(y), y); the sum runs
/// over all N symbols, counting branch points with multiplicity.
SampledFunction inner_product(const CographFunction& f, const CographFunction& g);

/// (phi(a) f)(x, y) = a(x) f(x, y).
CographFunction left_action(const SampledFunction& a, const CographFunction& f);

/// (f . a)(x, y) = f(x, y) a(y).
CographFunction right_action(const CographFunction& f, const SampledFunction& a);

/// ||f||_2 = sup_y (f|f)_A(y)^(1/2).
double norm2(const CographFunction& f);

/// theta_{xi,eta}(zeta) = xi (eta|zeta)_A.
CographFunction rank_one_apply(const CographFunction& xi, const CographFunction& eta,
                               const CographFunction& zeta);

/// The constant unit vector xi0 = 1/sqrt(N); (xi0|xi0)_A = 1.
CographFunction xi0(CographSamplePtr sample);

/// Finite sums of rank one operators on X.
struct FiniteRankOperator {
  std::vector<std::pair<CographFunction, CographFunction>> pairs;  // (xi_k, eta_k)
  CographFunction apply(const CographFunction& zeta) const;
};

/// An element of Y_n = C(P_n), identified with the n-fold tensor power of X:
/// one value per (path word, grid word) key.
class PathFunction {
public:
  PathFunction() = default;
  PathFunction(CographSamplePtr sample, int depth, Eigen::MatrixXcd values);  // N^n x G

  static PathFunction constant(CographSamplePtr sample, int depth, Complex value);

  const CographSample& sample() const { return *sample_; }
  CographSamplePtr sample_ptr() const { return sample_; }
  const SampleGrid& grid() const { return sample_->grid(); }
  int depth() const { return depth_; }
  const WordTable& words() const { return words_; }

  Complex at(std::uint64_t w, std::uint64_t u) const {
    return values_(static_cast<long>(w), static_cast<long>(u));
  }
  Complex& at(std::uint64_t w, std::uint64_t u) {
    return values_(static_cast<long>(w), static_cast<long>(u));
  }
  const Eigen::MatrixXcd& values() const { return values_; }
  Eigen::MatrixXcd& values() { return values_; }

  double sup_norm() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }

  PathFunction operator+(const PathFunction& o) const;
  PathFunction operator-(const PathFunction& o) const;
  PathFunction operator*(Complex s) const;
  PathFunction right_mul(const SampledFunction& a) const;  // f . a

private:
  CographSamplePtr sample_;
  int depth_ = 0;
  WordTable words_{2, 0};
  Eigen::MatrixXcd values_;
};

SampledFunction path_inner_product(const PathFunction& f, const PathFunction& g);
double norm2(const PathFunction& f);

/// Depth-1 path function from a cograph function (key identification
/// (i) <-> words of length one).
PathFunction path_from_cograph(const CographFunction& f);

/// The bimodule isomorphism onto C(P_n): value at (w, y) is the product of
/// the factors along the suffix chain of w.
PathFunction tensor_to_path(const std::vector<CographFunction>& factors);

/// Iterated-inner-product route for the same tensor:
/// (f1 x ... x fn | g1 x ... x gn)_A, computed recursively. Independent of
/// tensor_to_path / path_inner_product; the two routes must agree.
SampledFunction tensor_inner_product(const std::vector<CographFunction>& fs,
                                     const std::vector<CographFunction>& gs);

/// Pullback along rho(P_n tuple) = (endpoint, base): input values keyed by
/// (w, y) must depend only on the exact endpoint map; validated, then
/// re-keyed. Inner products are preserved since both sides sum over W_n.
PathFunction cograph_pullback(const PathFunction& f, double tol = 1e-12);

/// Builds a function on the depth-n cograph sample from a formula in the
/// exact endpoint and base points (always a valid pullback input).
PathFunction gn_function(CographSamplePtr sample, int depth,
                         const std::function<Complex(const Vec&, const Vec&)>& fn);

/// An element of Y_n supported on an explicit list of path words. The
/// amplification witnesses live here: their cutoffs vanish off the handful
/// of cells around the located peak, so the dense N^n-fiber array is never
/// materialized.
class SparsePathFunction {
public:
  SparsePathFunction() = default;
  SparsePathFunction(CographSamplePtr sample, int depth, std::vector<Word> words,
                     Eigen::MatrixXcd values);  // |words| x G

  const CographSample& sample() const { return *sample_; }
  CographSamplePtr sample_ptr() const { return sample_; }
  const SampleGrid& grid() const { return sample_->grid(); }
  int depth() const { return depth_; }
  const std::vector<Word>& support() const { return words_; }
  const Eigen::MatrixXcd& values() const { return values_; }
  Eigen::MatrixXcd& values() { return values_; }

  SparsePathFunction right_mul(const SampledFunction& a) const;

  /// Densify; throws ResourceLimitError past the entry cap.
  PathFunction to_dense(std::uint64_t cap = (1u << 23)) const;

private:
  CographSamplePtr sample_;
  int depth_ = 0;
  std::vector<Word> words_;
  Eigen::MatrixXcd values_;
};

/// (f|g)_A over the shared support list.
SampledFunction sparse_inner_product(const SparsePathFunction& f, const SparsePathFunction& g);

/// (f | phi(a) f)_A without materializing the left action.
SampledFunction sparse_phi_inner(const SampledFunction& a, const SparsePathFunction& f);

double norm2(const SparsePathFunction& f);

/// Operators on Y_n in their fiberwise form: over each grid point y an
/// N^n x N^n matrix acting on the w-fiber. Left actions are diagonal fibers,
/// finite-rank operators are low-rank fibers; both are stored structurally
/// so norms and applications never materialize the full matrices. A dense
/// form exists for small fiber dimensions.
class PathOperator {
public:
  enum class Form { Zero, Identity, Diagonal, FiniteRank, Dense };

  PathOperator(CographSamplePtr sample, int depth);  // zero operator

  static PathOperator identity(CographSamplePtr sample, int depth);
  /// phi_n(a): fiber diag( a(gamma_w(y)) ).
  static PathOperator left_mult(const SampledFunction& a, CographSamplePtr sample, int depth);
  static PathOperator finite_rank(std::vector<std::pair<PathFunction, PathFunction>> pairs);
  static PathOperator dense(CographSamplePtr sample, int depth,
                            std::vector<Eigen::MatrixXcd> fibers,
                            std::uint64_t cap = (1u << 24));

  Form form() const { return form_; }
  const CographSample& sample() const { return *sample_; }
  CographSamplePtr sample_ptr() const { return sample_; }
  int depth() const { return depth_; }
  std::uint64_t fiber_dim() const { return fiber_dim_; }

  PathFunction apply(const PathFunction& f) const;
  /// Operator norm: sup over grid points of the fiber spectral norm.
  double op_norm() const;
  /// Grid point attaining the fiber norm sup (lexicographic tie break).
  std::uint64_t argmax_fiber() const;
  /// Materializes the fiber matrix over one grid point.
  Eigen::MatrixXcd fiber_matrix(std::uint64_t u) const;

private:
  double fiber_norm(std::uint64_t u) const;

  Form form_ = Form::Zero;
  CographSamplePtr sample_;
  int depth_ = 0;
  std::uint64_t fiber_dim_ = 0;
  Eigen::MatrixXcd diag_;                                       // Diagonal: N^n x G
  std::vector<std::pair<PathFunction, PathFunction>> pairs_;    // FiniteRank
  std::vector<Eigen::MatrixXcd> fibers_;                        // Dense
};

/// Partition-of-unity compact approximation of phi(a) (the constructive side
/// of the ideal membership test): patches are depth-level cells kept away
/// from the branch set, xi_k = a sqrt(f_k), eta_k = sqrt(f_k). When the
/// support of `a` reaches the branch set at this resolution no approximant
/// exists; the result then carries the measured probe lower bound instead.
struct CompactApproxResult {
  bool ok = false;
  FiniteRankOperator op;
  double residual = 0.0;           // sup over probes of ||phi(a) z - T z||_2 / ||z||_2
  double probe_lower_bound = 0.0;  // certified obstruction when !ok
  int partition_depth = 0;
  int patch_count = 0;
  std::string detail;
};

CompactApproxResult compact_approx(const SampledFunction& a, const BranchReport& branch,
                                   int partition_depth, bool osc_verified,
                                   CographSamplePtr sample, int probe_count = 50,
                                   std::uint64_t seed = 7);

}  // namespace selfsim
