#include "selfsim/bimodule.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "selfsim/errors.hpp"
#include "selfsim/rng.hpp"

namespace selfsim {

namespace {

void require_same_grid(const SampleGrid& a, const SampleGrid& b) {
  if (a.content_hash() != b.content_hash())
    throw InvalidInputError("operands live on different sample grids");
}

void require_same_sample(const CographSample& a, const CographSample& b) {
  require_same_grid(a.grid(), b.grid());
}

}  // namespace

// ---------------------------------------------------------------------------
// SampledFunction

SampledFunction::SampledFunction(GridPtr grid, Eigen::VectorXcd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<std::uint64_t>(values_.size()) != grid_->size())
    throw InvalidInputError("sampled function value count does not match the grid");
}

SampledFunction SampledFunction::constant(GridPtr grid, Complex value) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Constant(static_cast<long>(grid->size()), value);
  return SampledFunction(std::move(grid), std::move(v));
}

SampledFunction SampledFunction::from_function(GridPtr grid,
                                               const std::function<Complex(const Vec&)>& fn) {
  Eigen::VectorXcd v(static_cast<long>(grid->size()));
  for (std::uint64_t u = 0; u < grid->size(); ++u) v[static_cast<long>(u)] = fn(grid->point(u));
  return SampledFunction(std::move(grid), std::move(v));
}

double SampledFunction::min_real() const {
  double out = std::numeric_limits<double>::infinity();
  for (long k = 0; k < values_.size(); ++k) out = std::min(out, values_[k].real());
  return out;
}

bool SampledFunction::is_real(double tol) const {
  for (long k = 0; k < values_.size(); ++k)
    if (std::abs(values_[k].imag()) > tol) return false;
  return true;
}

SampledFunction SampledFunction::conjugate() const {
  return SampledFunction(grid_, values_.conjugate());
}

SampledFunction SampledFunction::operator+(const SampledFunction& o) const {
  require_same_grid(*grid_, *o.grid_);
  return SampledFunction(grid_, values_ + o.values_);
}

SampledFunction SampledFunction::operator-(const SampledFunction& o) const {
  require_same_grid(*grid_, *o.grid_);
  return SampledFunction(grid_, values_ - o.values_);
}

SampledFunction SampledFunction::operator*(const SampledFunction& o) const {
  require_same_grid(*grid_, *o.grid_);
  return SampledFunction(grid_, values_.cwiseProduct(o.values_));
}

SampledFunction SampledFunction::operator*(Complex s) const {
  return SampledFunction(grid_, values_ * s);
}

SampledFunction SampledFunction::real_pow(double exponent) const {
  Eigen::VectorXcd v(values_.size());
  for (long k = 0; k < values_.size(); ++k) {
    double re = values_[k].real();
    if (re <= 0.0)
      throw InvalidInputError("real_pow needs a strictly positive real function");
    v[k] = Complex(std::pow(re, exponent), 0.0);
  }
  return SampledFunction(grid_, std::move(v));
}

// ---------------------------------------------------------------------------
// CographFunction

CographFunction::CographFunction(CographSamplePtr sample, Eigen::MatrixXcd values)
    : sample_(std::move(sample)), values_(std::move(values)) {
  if (values_.rows() != sample_->symbol_count() ||
      static_cast<std::uint64_t>(values_.cols()) != sample_->grid().size())
    throw InvalidInputError("cograph function shape does not match the sample");
}

CographFunction CographFunction::constant(CographSamplePtr sample, Complex value) {
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Constant(
      sample->symbol_count(), static_cast<long>(sample->grid().size()), value);
  return CographFunction(std::move(sample), std::move(v));
}

CographFunction CographFunction::from_function(
    CographSamplePtr sample, const std::function<Complex(const Vec&, const Vec&)>& fn) {
  const auto& grid = sample->grid();
  const auto& system = grid.system();
  Eigen::MatrixXcd v(sample->symbol_count(), static_cast<long>(grid.size()));
  for (std::uint64_t u = 0; u < grid.size(); ++u)
    for (int i = 1; i <= system.map_count(); ++i)
      v(i - 1, static_cast<long>(u)) = fn(system.map(i).apply(grid.point(u)), grid.point(u));
  CographFunction out(std::move(sample), std::move(v));
  out.canonicalize();  // exact agreement at merged keys
  return out;
}

double CographFunction::branch_violation() const {
  double worst = 0.0;
  const auto& s = *sample_;
  for (std::uint64_t u : s.merged_points()) {
    for (int i = 1; i <= symbol_count(); ++i) {
      int rep = s.merge_rep(i, u);
      if (rep != i)
        worst = std::max(worst, std::abs(at(i, u) - at(rep, u)));
    }
  }
  return worst;
}

void CographFunction::canonicalize() {
  const auto& s = *sample_;
  for (std::uint64_t u : s.merged_points())
    for (int i = 1; i <= symbol_count(); ++i) {
      int rep = s.merge_rep(i, u);
      if (rep != i) at(i, u) = at(rep, u);
    }
}

CographFunction CographFunction::operator+(const CographFunction& o) const {
  require_same_sample(*sample_, *o.sample_);
  return CographFunction(sample_, values_ + o.values_);
}

CographFunction CographFunction::operator-(const CographFunction& o) const {
  require_same_sample(*sample_, *o.sample_);
  return CographFunction(sample_, values_ - o.values_);
}

CographFunction CographFunction::operator*(Complex s) const {
  return CographFunction(sample_, values_ * s);
}

CographFunction CographFunction::pointwise_mul(const CographFunction& o) const {
  require_same_sample(*sample_, *o.sample_);
  return CographFunction(sample_, values_.cwiseProduct(o.values_));
}

// ---------------------------------------------------------------------------
// Module operations on X

SampledFunction inner_product(const CographFunction& f, const CographFunction& g) {
  require_same_sample(f.sample(), g.sample());
  const auto& grid = f.grid();
  Eigen::VectorXcd out(static_cast<long>(grid.size()));
  for (std::uint64_t u = 0; u < grid.size(); ++u) {
    Complex acc = 0.0;
    for (int i = 1; i <= f.symbol_count(); ++i)
      acc += std::conj(f.at(i, u)) * g.at(i, u);
    out[static_cast<long>(u)] = acc;
  }
  return SampledFunction(f.sample().grid_ptr(), std::move(out));
}

CographFunction left_action(const SampledFunction& a, const CographFunction& f) {
  require_same_grid(a.grid(), f.grid());
  const auto& grid = f.grid();
  Eigen::MatrixXcd out(f.symbol_count(), static_cast<long>(grid.size()));
  for (std::uint64_t u = 0; u < grid.size(); ++u)
    for (int i = 1; i <= f.symbol_count(); ++i)
      out(i - 1, static_cast<long>(u)) = a.at(grid.compose(i, u)) * f.at(i, u);
  CographFunction result(f.sample_ptr(), std::move(out));
  result.canonicalize();
  return result;
}

CographFunction right_action(const CographFunction& f, const SampledFunction& a) {
  require_same_grid(a.grid(), f.grid());
  Eigen::MatrixXcd out = f.values();
  for (long u = 0; u < out.cols(); ++u) out.col(u) *= a.at(static_cast<std::uint64_t>(u));
  return CographFunction(f.sample_ptr(), std::move(out));
}

double norm2(const CographFunction& f) {
  double sup = 0.0;
  for (long u = 0; u < f.values().cols(); ++u)
    sup = std::max(sup, f.values().col(u).squaredNorm());
  return std::sqrt(sup);
}

CographFunction rank_one_apply(const CographFunction& xi, const CographFunction& eta,
                               const CographFunction& zeta) {
  return right_action(xi, inner_product(eta, zeta));
}

CographFunction xi0(CographSamplePtr sample) {
  double n = static_cast<double>(sample->symbol_count());
  return CographFunction::constant(std::move(sample), Complex(1.0 / std::sqrt(n), 0.0));
}

CographFunction FiniteRankOperator::apply(const CographFunction& zeta) const {
  if (pairs.empty()) {
    CographFunction out = zeta * Complex(0.0, 0.0);
    return out;
  }
  CographFunction acc = rank_one_apply(pairs.front().first, pairs.front().second, zeta);
  for (std::size_t k = 1; k < pairs.size(); ++k)
    acc = acc + rank_one_apply(pairs[k].first, pairs[k].second, zeta);
  return acc;
}

// ---------------------------------------------------------------------------
// PathFunction

PathFunction::PathFunction(CographSamplePtr sample, int depth, Eigen::MatrixXcd values)
    : sample_(std::move(sample)), depth_(depth),
      words_(sample_->grid().system().map_count(), depth), values_(std::move(values)) {
  if (static_cast<std::uint64_t>(values_.rows()) != words_.size() ||
      static_cast<std::uint64_t>(values_.cols()) != sample_->grid().size())
    throw InvalidInputError("path function shape does not match depth and grid");
}

PathFunction PathFunction::constant(CographSamplePtr sample, int depth, Complex value) {
  WordTable table(sample->grid().system().map_count(), depth);
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Constant(
      static_cast<long>(table.size()), static_cast<long>(sample->grid().size()), value);
  return PathFunction(std::move(sample), depth, std::move(v));
}

PathFunction PathFunction::operator+(const PathFunction& o) const {
  require_same_sample(*sample_, *o.sample_);
  if (depth_ != o.depth_) throw InvalidInputError("path function depth mismatch");
  return PathFunction(sample_, depth_, values_ + o.values_);
}

PathFunction PathFunction::operator-(const PathFunction& o) const {
  require_same_sample(*sample_, *o.sample_);
  if (depth_ != o.depth_) throw InvalidInputError("path function depth mismatch");
  return PathFunction(sample_, depth_, values_ - o.values_);
}

PathFunction PathFunction::operator*(Complex s) const {
  return PathFunction(sample_, depth_, values_ * s);
}

PathFunction PathFunction::right_mul(const SampledFunction& a) const {
  require_same_grid(a.grid(), sample_->grid());
  Eigen::MatrixXcd out = values_;
  for (long u = 0; u < out.cols(); ++u) out.col(u) *= a.at(static_cast<std::uint64_t>(u));
  return PathFunction(sample_, depth_, std::move(out));
}

SampledFunction path_inner_product(const PathFunction& f, const PathFunction& g) {
  require_same_sample(f.sample(), g.sample());
  if (f.depth() != g.depth()) throw InvalidInputError("path function depth mismatch");
  const auto& grid = f.grid();
  Eigen::VectorXcd out(static_cast<long>(grid.size()));
  for (long u = 0; u < out.size(); ++u)
    out[u] = f.values().col(u).dot(g.values().col(u));  // Eigen dot conjugates the left side
  return SampledFunction(f.sample().grid_ptr(), std::move(out));
}

double norm2(const PathFunction& f) {
  double sup = 0.0;
  for (long u = 0; u < f.values().cols(); ++u)
    sup = std::max(sup, f.values().col(u).squaredNorm());
  return std::sqrt(sup);
}

PathFunction path_from_cograph(const CographFunction& f) {
  return PathFunction(f.sample_ptr(), 1, f.values());
}

PathFunction tensor_to_path(const std::vector<CographFunction>& factors) {
  if (factors.empty()) throw InvalidInputError("tensor_to_path needs at least one factor");
  const auto sample = factors.front().sample_ptr();
  for (const auto& f : factors) require_same_sample(*sample, f.sample());
  const auto& grid = sample->grid();
  const int n = static_cast<int>(factors.size());
  const int alphabet = grid.system().map_count();
  const std::uint64_t g = grid.size();

  // Build suffix products back to front. `vals` holds the product of the
  // last L factors along each suffix word; `bases` the truncated-word image
  // of the grid point under that suffix.
  Eigen::MatrixXcd vals(alphabet, static_cast<long>(g));
  std::vector<std::uint64_t> bases(static_cast<std::size_t>(alphabet) * g);
  const CographFunction& last = factors.back();
  for (std::uint64_t u = 0; u < g; ++u)
    for (int i = 1; i <= alphabet; ++i) {
      vals(i - 1, static_cast<long>(u)) = last.at(i, u);
      bases[static_cast<std::size_t>(i - 1) * g + u] = grid.compose(i, u);
    }

  for (int k = n - 2; k >= 0; --k) {
    const CographFunction& fk = factors[static_cast<std::size_t>(k)];
    const std::uint64_t prev_words = static_cast<std::uint64_t>(vals.rows());
    Eigen::MatrixXcd next_vals(static_cast<long>(prev_words * alphabet), static_cast<long>(g));
    std::vector<std::uint64_t> next_bases(prev_words * alphabet * g);
    for (int i = 1; i <= alphabet; ++i) {
      for (std::uint64_t v = 0; v < prev_words; ++v) {
        const std::uint64_t w = static_cast<std::uint64_t>(i - 1) * prev_words + v;
        for (std::uint64_t u = 0; u < g; ++u) {
          std::uint64_t base = bases[static_cast<std::size_t>(v) * g + u];
          next_vals(static_cast<long>(w), static_cast<long>(u)) =
              fk.at(i, base) * vals(static_cast<long>(v), static_cast<long>(u));
          next_bases[static_cast<std::size_t>(w) * g + u] = grid.compose(i, base);
        }
      }
    }
    vals = std::move(next_vals);
    bases = std::move(next_bases);
  }
  return PathFunction(sample, n, std::move(vals));
}

SampledFunction tensor_inner_product(const std::vector<CographFunction>& fs,
                                     const std::vector<CographFunction>& gs) {
  if (fs.size() != gs.size() || fs.empty())
    throw InvalidInputError("tensor inner product needs matching nonempty factor lists");
  const auto sample = fs.front().sample_ptr();
  const auto& grid = sample->grid();
  const int alphabet = grid.system().map_count();
  SampledFunction h = inner_product(fs.front(), gs.front());
  for (std::size_t k = 1; k < fs.size(); ++k) {
    require_same_sample(*sample, fs[k].sample());
    require_same_sample(*sample, gs[k].sample());
    Eigen::VectorXcd next(static_cast<long>(grid.size()));
    for (std::uint64_t u = 0; u < grid.size(); ++u) {
      Complex acc = 0.0;
      for (int i = 1; i <= alphabet; ++i)
        acc += std::conj(fs[k].at(i, u)) * h.at(grid.compose(i, u)) * gs[k].at(i, u);
      next[static_cast<long>(u)] = acc;
    }
    h = SampledFunction(sample->grid_ptr(), std::move(next));
  }
  return h;
}

PathFunction cograph_pullback(const PathFunction& f, double tol) {
  const auto& grid = f.grid();
  const auto& system = grid.system();
  const int n = f.depth();
  WordTable table(system.map_count(), n);

  // exact endpoint maps of all length-n words
  std::vector<ContractionMap> maps;
  maps.reserve(table.size());
  for (std::uint64_t w = 0; w < table.size(); ++w)
    maps.push_back(system.word_map(table.word_at(w)));

  double scale = 1.0 + system.hull().center.cwiseAbs().maxCoeff() + system.hull().radius;
  Eigen::MatrixXcd out = f.values();
  for (std::uint64_t u = 0; u < grid.size(); ++u) {
    // group words by exact endpoint coincidence and copy the representative
    std::vector<Vec> endpoints(maps.size());
    for (std::uint64_t w = 0; w < maps.size(); ++w)
      endpoints[w] = maps[w].apply(grid.point(u));
    for (std::uint64_t w = 0; w < maps.size(); ++w) {
      for (std::uint64_t v = 0; v < w; ++v) {
        if ((endpoints[w] - endpoints[v]).norm() <= 1e-12 * scale) {
          if (std::abs(f.at(w, u) - f.at(v, u)) > tol)
            throw InvalidInputError(
                "input is not well defined on the depth-" + std::to_string(n) +
                " cograph: words with equal endpoints carry different values");
          out(static_cast<long>(w), static_cast<long>(u)) = out(static_cast<long>(v),
                                                                static_cast<long>(u));
          break;
        }
      }
    }
  }
  return PathFunction(f.sample_ptr(), n, std::move(out));
}

PathFunction gn_function(CographSamplePtr sample, int depth,
                         const std::function<Complex(const Vec&, const Vec&)>& fn) {
  const auto& grid = sample->grid();
  const auto& system = grid.system();
  WordTable table(system.map_count(), depth);
  std::vector<ContractionMap> maps;
  maps.reserve(table.size());
  for (std::uint64_t w = 0; w < table.size(); ++w)
    maps.push_back(system.word_map(table.word_at(w)));
  Eigen::MatrixXcd out(static_cast<long>(table.size()), static_cast<long>(grid.size()));
  for (std::uint64_t u = 0; u < grid.size(); ++u)
    for (std::uint64_t w = 0; w < table.size(); ++w)
      out(static_cast<long>(w), static_cast<long>(u)) =
          fn(maps[w].apply(grid.point(u)), grid.point(u));
  return PathFunction(std::move(sample), depth, std::move(out));
}

// ---------------------------------------------------------------------------
// SparsePathFunction

SparsePathFunction::SparsePathFunction(CographSamplePtr sample, int depth,
                                       std::vector<Word> words, Eigen::MatrixXcd values)
    : sample_(std::move(sample)), depth_(depth), words_(std::move(words)),
      values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.rows()) != words_.size() ||
      static_cast<std::uint64_t>(values_.cols()) != sample_->grid().size())
    throw InvalidInputError("sparse path function shape mismatch");
  for (const auto& w : words_)
    if (static_cast<int>(w.length()) != depth_)
      throw InvalidInputError("sparse path support word has the wrong length");
}

SparsePathFunction SparsePathFunction::right_mul(const SampledFunction& a) const {
  require_same_grid(a.grid(), sample_->grid());
  Eigen::MatrixXcd out = values_;
  for (long u = 0; u < out.cols(); ++u) out.col(u) *= a.at(static_cast<std::uint64_t>(u));
  return SparsePathFunction(sample_, depth_, words_, std::move(out));
}

PathFunction SparsePathFunction::to_dense(std::uint64_t cap) const {
  WordTable table(sample_->grid().system().map_count(), depth_);
  if (table.size() * sample_->grid().size() > cap)
    throw ResourceLimitError("densified path function would exceed the entry cap");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<long>(table.size()),
                                                static_cast<long>(sample_->grid().size()));
  for (std::size_t k = 0; k < words_.size(); ++k)
    out.row(static_cast<long>(table.index_of(words_[k]))) = values_.row(static_cast<long>(k));
  return PathFunction(sample_, depth_, std::move(out));
}

SampledFunction sparse_inner_product(const SparsePathFunction& f, const SparsePathFunction& g) {
  require_same_sample(f.sample(), g.sample());
  if (f.depth() != g.depth() || f.support().size() != g.support().size())
    throw InvalidInputError("sparse path functions must share depth and support");
  for (std::size_t k = 0; k < f.support().size(); ++k)
    if (!(f.support()[k] == g.support()[k]))
      throw InvalidInputError("sparse path functions must share their support list");
  Eigen::VectorXcd out(static_cast<long>(f.grid().size()));
  for (long u = 0; u < out.size(); ++u)
    out[u] = f.values().col(u).dot(g.values().col(u));
  return SampledFunction(f.sample().grid_ptr(), std::move(out));
}

SampledFunction sparse_phi_inner(const SampledFunction& a, const SparsePathFunction& f) {
  require_same_grid(a.grid(), f.grid());
  const auto& grid = f.grid();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<long>(grid.size()));
  for (std::size_t k = 0; k < f.support().size(); ++k) {
    const Word& w = f.support()[k];
    for (std::uint64_t u = 0; u < grid.size(); ++u) {
      Complex v = f.values()(static_cast<long>(k), static_cast<long>(u));
      out[static_cast<long>(u)] += a.at(grid.compose_word(w, u)) * std::norm(v);
    }
  }
  return SampledFunction(f.sample().grid_ptr(), std::move(out));
}

double norm2(const SparsePathFunction& f) {
  double sup = 0.0;
  for (long u = 0; u < f.values().cols(); ++u)
    sup = std::max(sup, f.values().col(u).squaredNorm());
  return std::sqrt(sup);
}

// ---------------------------------------------------------------------------
// PathOperator

PathOperator::PathOperator(CographSamplePtr sample, int depth)
    : form_(Form::Zero), sample_(std::move(sample)), depth_(depth),
      fiber_dim_(pow_u64(sample_->grid().system().map_count(), depth)) {
  if (depth < 0) throw InvalidInputError("path operator depth must be nonnegative");
}

PathOperator PathOperator::identity(CographSamplePtr sample, int depth) {
  PathOperator out(std::move(sample), depth);
  out.form_ = Form::Identity;
  return out;
}

PathOperator PathOperator::left_mult(const SampledFunction& a, CographSamplePtr sample,
                                     int depth) {
  require_same_grid(a.grid(), sample->grid());
  PathOperator out(sample, depth);
  out.form_ = Form::Diagonal;
  const auto& grid = sample->grid();
  WordTable table(grid.system().map_count(), depth);
  out.diag_.resize(static_cast<long>(table.size()), static_cast<long>(grid.size()));
  for (std::uint64_t w = 0; w < table.size(); ++w) {
    Word word = table.word_at(w);
    for (std::uint64_t u = 0; u < grid.size(); ++u)
      out.diag_(static_cast<long>(w), static_cast<long>(u)) =
          a.at(grid.compose_word(word, u));
  }
  return out;
}

PathOperator PathOperator::finite_rank(std::vector<std::pair<PathFunction, PathFunction>> pairs) {
  if (pairs.empty()) throw InvalidInputError("finite rank operator needs at least one pair");
  PathOperator out(pairs.front().first.sample_ptr(), pairs.front().first.depth());
  for (const auto& [xi, eta] : pairs) {
    require_same_sample(*out.sample_, xi.sample());
    require_same_sample(*out.sample_, eta.sample());
    if (xi.depth() != out.depth_ || eta.depth() != out.depth_)
      throw InvalidInputError("finite rank pair depths differ");
  }
  out.form_ = Form::FiniteRank;
  out.pairs_ = std::move(pairs);
  return out;
}

PathOperator PathOperator::dense(CographSamplePtr sample, int depth,
                                 std::vector<Eigen::MatrixXcd> fibers, std::uint64_t cap) {
  PathOperator out(sample, depth);
  const auto& grid = sample->grid();
  if (fibers.size() != grid.size())
    throw InvalidInputError("dense path operator needs one fiber per grid point");
  if (out.fiber_dim_ * out.fiber_dim_ * grid.size() > cap)
    throw ResourceLimitError("dense path operator exceeds the entry cap");
  for (const auto& m : fibers)
    if (static_cast<std::uint64_t>(m.rows()) != out.fiber_dim_ ||
        static_cast<std::uint64_t>(m.cols()) != out.fiber_dim_)
      throw InvalidInputError("dense fiber has the wrong dimension");
  out.form_ = Form::Dense;
  out.fibers_ = std::move(fibers);
  return out;
}

PathFunction PathOperator::apply(const PathFunction& f) const {
  require_same_sample(*sample_, f.sample());
  if (f.depth() != depth_) throw InvalidInputError("path operator depth mismatch");
  switch (form_) {
    case Form::Zero:
      return f * Complex(0.0, 0.0);
    case Form::Identity:
      return f;
    case Form::Diagonal:
      return PathFunction(sample_, depth_, diag_.cwiseProduct(f.values()));
    case Form::FiniteRank: {
      PathFunction acc = f * Complex(0.0, 0.0);
      for (const auto& [xi, eta] : pairs_)
        acc = acc + xi.right_mul(path_inner_product(eta, f));
      return acc;
    }
    case Form::Dense: {
      Eigen::MatrixXcd out(f.values().rows(), f.values().cols());
      for (long u = 0; u < out.cols(); ++u)
        out.col(u) = fibers_[static_cast<std::size_t>(u)] * f.values().col(u);
      return PathFunction(sample_, depth_, std::move(out));
    }
  }
  throw InternalError("unhandled path operator form");
}

double PathOperator::fiber_norm(std::uint64_t u) const {
  switch (form_) {
    case Form::Zero: return 0.0;
    case Form::Identity: return 1.0;
    case Form::Diagonal: return diag_.col(static_cast<long>(u)).cwiseAbs().maxCoeff();
    case Form::FiniteRank: {
      // fiber = U V^H with skinny U, V; nonzero singular values come from the
      // K x K pencil (V^H V)(U^H U)
      const long k = static_cast<long>(pairs_.size());
      Eigen::MatrixXcd gu(k, k), gv(k, k);
      for (long p = 0; p < k; ++p)
        for (long q = 0; q < k; ++q) {
          gu(p, q) = pairs_[static_cast<std::size_t>(p)].first.values().col(
              static_cast<long>(u)).dot(
              pairs_[static_cast<std::size_t>(q)].first.values().col(static_cast<long>(u)));
          gv(p, q) = pairs_[static_cast<std::size_t>(p)].second.values().col(
              static_cast<long>(u)).dot(
              pairs_[static_cast<std::size_t>(q)].second.values().col(static_cast<long>(u)));
        }
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(gv * gu, false);
      double best = 0.0;
      for (long p = 0; p < eig.eigenvalues().size(); ++p)
        best = std::max(best, eig.eigenvalues()[p].real());
      return std::sqrt(std::max(0.0, best));
    }
    case Form::Dense: {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(fibers_[u]);
      return svd.singularValues()(0);
    }
  }
  throw InternalError("unhandled path operator form");
}

double PathOperator::op_norm() const {
  double out = 0.0;
  for (std::uint64_t u = 0; u < sample_->grid().size(); ++u)
    out = std::max(out, fiber_norm(u));
  return out;
}

std::uint64_t PathOperator::argmax_fiber() const {
  double best = -1.0;
  std::uint64_t arg = 0;
  for (std::uint64_t u = 0; u < sample_->grid().size(); ++u) {
    double v = fiber_norm(u);
    if (v > best + 1e-15) {
      best = v;
      arg = u;
    }
  }
  return arg;
}

Eigen::MatrixXcd PathOperator::fiber_matrix(std::uint64_t u) const {
  const long d = static_cast<long>(fiber_dim_);
  switch (form_) {
    case Form::Zero: return Eigen::MatrixXcd::Zero(d, d);
    case Form::Identity: return Eigen::MatrixXcd::Identity(d, d);
    case Form::Diagonal: {
      Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
      out.diagonal() = diag_.col(static_cast<long>(u));
      return out;
    }
    case Form::FiniteRank: {
      Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
      for (const auto& [xi, eta] : pairs_)
        out += xi.values().col(static_cast<long>(u)) *
               eta.values().col(static_cast<long>(u)).adjoint();
      return out;
    }
    case Form::Dense: return fibers_[u];
  }
  throw InternalError("unhandled path operator form");
}

// ---------------------------------------------------------------------------
// compact_approx

namespace {

// Distance from a point to the detected branch set (isolated x's plus
// clipped x-space segments).
double branch_distance(const BranchReport& branch, const Vec& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& rec : branch.points) best = std::min(best, (p - rec.x).norm());
  for (const auto& seg : branch.segments) {
    double dir2 = seg.direction.squaredNorm();
    if (dir2 == 0.0) continue;
    double t = (p - seg.anchor).dot(seg.direction) / dir2;
    for (const auto& [a, b] : seg.intervals) {
      double tc = std::clamp(t, a, b);
      best = std::min(best, (p - (seg.anchor + tc * seg.direction)).norm());
    }
  }
  return best;
}

}  // namespace

CompactApproxResult compact_approx(const SampledFunction& a, const BranchReport& branch,
                                   int partition_depth, bool osc_verified,
                                   CographSamplePtr sample, int probe_count,
                                   std::uint64_t seed) {
  CompactApproxResult result;
  result.partition_depth = partition_depth;
  if (!osc_verified) {
    result.ok = false;
    result.detail = "unsupported: the open set condition was not verified for this system";
    return result;
  }
  require_same_grid(a.grid(), sample->grid());
  const auto& grid = sample->grid();
  const auto& system = grid.system();

  CellTree tree = attractor_cells(system, partition_depth);
  const auto& cells = tree.cells();

  // patches: depth-level cells whose ball stays clear of the branch set
  std::vector<int> patch_of_cell(cells.size(), -1);
  int patch_count = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (branch_distance(branch, cells[c].center) > cells[c].radius)
      patch_of_cell[c] = patch_count++;
  }
  result.patch_count = patch_count;

  // assign every grid point to the lexicographically first covering patch
  std::vector<int> patch_of_word(grid.size(), -1);
  bool uncovered_support = false;
  double support_eps = 1e-13 * std::max(1.0, a.sup_norm());
  for (std::uint64_t u = 0; u < grid.size(); ++u) {
    const Vec& p = grid.point(u);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (patch_of_cell[c] < 0) continue;
      if ((p - cells[c].center).norm() <= cells[c].radius) {
        patch_of_word[u] = patch_of_cell[c];
        break;
      }
    }
    if (patch_of_word[u] < 0 && std::abs(a.at(u)) > support_eps) uncovered_support = true;
  }

  // xi_k(x,y) = a(x) 1_{patch k}(x), eta_k(x,y) = 1_{patch k}(x); the grid
  // realization of the sqrt-partition pair (sqrt of an indicator is itself)
  const int n_sym = system.map_count();
  std::vector<Eigen::MatrixXcd> xis(static_cast<std::size_t>(patch_count)),
      etas(static_cast<std::size_t>(patch_count));
  for (auto& m : xis) m = Eigen::MatrixXcd::Zero(n_sym, static_cast<long>(grid.size()));
  for (auto& m : etas) m = Eigen::MatrixXcd::Zero(n_sym, static_cast<long>(grid.size()));
  for (std::uint64_t u = 0; u < grid.size(); ++u) {
    for (int i = 1; i <= n_sym; ++i) {
      std::uint64_t z = grid.compose(i, u);
      int k = patch_of_word[z];
      if (k < 0) continue;
      etas[static_cast<std::size_t>(k)](i - 1, static_cast<long>(u)) = 1.0;
      xis[static_cast<std::size_t>(k)](i - 1, static_cast<long>(u)) = a.at(z);
    }
  }
  for (int k = 0; k < patch_count; ++k) {
    if (xis[static_cast<std::size_t>(k)].cwiseAbs().maxCoeff() <= support_eps) continue;
    CographFunction xi(sample, xis[static_cast<std::size_t>(k)]);
    CographFunction eta(sample, etas[static_cast<std::size_t>(k)]);
    xi.canonicalize();
    eta.canonicalize();
    result.op.pairs.emplace_back(std::move(xi), std::move(eta));
  }

  // probe inventory: the proof's branch-sheet probes plus random functions
  std::vector<CographFunction> probes;
  for (const auto& rec : branch.points) {
    std::uint64_t ub = grid.nearest(rec.y);
    Eigen::MatrixXcd sheet = Eigen::MatrixXcd::Zero(n_sym, static_cast<long>(grid.size()));
    int i0 = rec.indices.front();
    // branch probe: 1 on the whole merge class over the branch preimage
    for (int i = 1; i <= n_sym; ++i)
      if (sample->merge_rep(i, ub) == sample->merge_rep(i0, ub))
        sheet(i - 1, static_cast<long>(ub)) = 1.0;
    probes.emplace_back(sample, sheet);
    // sheet probe: a nearby single-sheet bump with branch index one
    for (std::uint64_t step = 1; step < grid.size(); ++step) {
      std::uint64_t un = (ub + step) % grid.size();
      if (sample->merge_rep(i0, un) == i0) {
        bool alone = true;
        for (int i = 1; i <= n_sym; ++i)
          if (i != i0 && sample->merge_rep(i, un) == i0) alone = false;
        if (!alone) continue;
        if ((grid.point(un) - rec.y).norm() > 4.0 * grid.tol()) continue;
        Eigen::MatrixXcd single = Eigen::MatrixXcd::Zero(n_sym, static_cast<long>(grid.size()));
        single(i0 - 1, static_cast<long>(un)) = 1.0;
        probes.emplace_back(sample, single);
        break;
      }
    }
  }
  std::size_t proof_probes = probes.size();
  Rng rng(seed);
  for (int k = 0; k < probe_count; ++k) probes.push_back(random_cograph_function(sample, rng));

  auto residual_ratio = [&](const CographFunction& zeta) {
    double nz = norm2(zeta);
    if (nz == 0.0) return 0.0;
    CographFunction diff = left_action(a, zeta) - result.op.apply(zeta);
    return norm2(diff) / nz;
  };

  double worst = 0.0, worst_proof = 0.0;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    double r = residual_ratio(probes[k]);
    worst = std::max(worst, r);
    if (k < proof_probes) worst_proof = std::max(worst_proof, r);
  }

  if (uncovered_support) {
    result.ok = false;
    result.probe_lower_bound = worst_proof;
    result.residual = worst;
    result.detail = "support of a reaches the branch set at partition depth " +
                    std::to_string(partition_depth);
    return result;
  }
  result.ok = true;
  result.residual = worst;
  result.detail = "approximant built from " + std::to_string(result.op.pairs.size()) +
                  " patches";
  return result;
}

}  // namespace selfsim
