#include "selfsim/transfer.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "selfsim/errors.hpp"

namespace selfsim {

namespace {

double inf_dist(const Vec& a, const Vec& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

SampledFunction beta(int symbol, const SampledFunction& a) {
  const auto& grid = a.grid();
  grid.system().map(symbol);  // validates the symbol
  Eigen::VectorXcd out(static_cast<long>(grid.size()));
  for (std::uint64_t u = 0; u < grid.size(); ++u)
    out[static_cast<long>(u)] = a.at(grid.compose(symbol, u));
  return SampledFunction(a.grid_ptr(), std::move(out));
}

SampledFunction transfer_op(const SampledFunction& a) {
  const auto& grid = a.grid();
  const int n = grid.system().map_count();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<long>(grid.size()));
  for (std::uint64_t u = 0; u < grid.size(); ++u) {
    Complex acc = 0.0;
    for (int i = 1; i <= n; ++i) acc += a.at(grid.compose(i, u));
    out[static_cast<long>(u)] = acc / static_cast<double>(n);
  }
  return SampledFunction(a.grid_ptr(), std::move(out));
}

std::variant<InvariantFunction, InvarianceFailure> certify_invariant(const SampledFunction& a,
                                                                     int n, double tol,
                                                                     std::uint64_t cap) {
  const auto& grid = a.grid();
  const int alphabet = grid.system().map_count();
  const std::uint64_t g = grid.size();
  if (n < 0) throw InvalidInputError("invariance depth must be nonnegative");
  if (pow_u64(alphabet, n) * g > cap)
    throw ResourceLimitError("invariance certificate would exceed the word-table cap");

  InvariantFunction cert;
  cert.fn = a;
  cert.depth = n;
  cert.tol = tol;

  // bases[w * g + u] = grid word of the truncated composition gamma_w on u
  std::vector<std::uint64_t> bases(g);
  for (std::uint64_t u = 0; u < g; ++u) bases[u] = u;
  std::uint64_t words = 1;
  for (int k = 1; k <= n; ++k) {
    std::vector<std::uint64_t> next(words * static_cast<std::uint64_t>(alphabet) * g);
    for (int i = 1; i <= alphabet; ++i)
      for (std::uint64_t w = 0; w < words; ++w)
        for (std::uint64_t u = 0; u < g; ++u)
          next[(static_cast<std::uint64_t>(i - 1) * words + w) * g + u] =
              grid.compose(i, bases[w * g + u]);
    bases = std::move(next);
    words *= static_cast<std::uint64_t>(alphabet);

    // spread at level k relative to the first word
    WordTable table(alphabet, k);
    for (std::uint64_t u = 0; u < g; ++u) {
      Complex ref = a.at(bases[u]);  // word index 0 = (1,...,1)
      for (std::uint64_t w = 1; w < words; ++w) {
        double dev = std::abs(a.at(bases[w * g + u]) - ref);
        if (dev > cert.worst_spread) cert.worst_spread = dev;
        if (dev > tol) {
          InvarianceFailure fail;
          fail.length = k;
          fail.w = table.word_at(w);
          fail.v = table.word_at(0);
          fail.grid_word = u;
          fail.spread = dev;
          return fail;
        }
      }
    }
    // well-defined iterate along the all-ones word
    Eigen::VectorXcd it(static_cast<long>(g));
    for (std::uint64_t u = 0; u < g; ++u) it[static_cast<long>(u)] = a.at(bases[u]);
    cert.iterates.emplace_back(a.grid_ptr(), std::move(it));
  }
  return cert;
}

double commutation_check(const InvariantFunction& a, const CographFunction& f) {
  if (a.depth < 1) throw InvalidInputError("commutation check needs certification depth >= 1");
  CographFunction lhs = left_action(a.fn, f);
  CographFunction rhs = right_action(f, a.iterate(1));
  return norm2(lhs - rhs);
}

double commutation_check_path(const InvariantFunction& a, const PathFunction& f) {
  const int n = f.depth();
  if (a.depth < n) throw InvalidInputError("certification depth below the path depth");
  const auto& grid = f.grid();
  WordTable table(grid.system().map_count(), n);
  PathFunction rhs = f.right_mul(a.iterate(n));
  Eigen::MatrixXcd lhs(f.values().rows(), f.values().cols());
  for (std::uint64_t w = 0; w < table.size(); ++w) {
    Word word = table.word_at(w);
    for (std::uint64_t u = 0; u < grid.size(); ++u)
      lhs(static_cast<long>(w), static_cast<long>(u)) =
          a.fn.at(grid.compose_word(word, u)) * f.at(w, u);
  }
  return norm2(PathFunction(f.sample_ptr(), n, std::move(lhs)) - rhs);
}

// ---------------------------------------------------------------------------
// amplify / normalize_witness

namespace {

// Words of the given length whose cells meet the sup-norm box around the
// peak; the cutoff vanishes on every other word.
void collect_support_words(const IfsSystem& system, const Vec& peak, double box_radius,
                           const ContractionMap& acc, double radius, int remaining,
                           Word& current, std::vector<Word>& out) {
  Vec center = acc.apply(system.hull().center);
  double dist = 0.0;
  for (int k = 0; k < center.size(); ++k)
    dist = std::max(dist, std::abs(center(k) - peak(k)));
  if (dist > box_radius + radius) return;  // cell cannot meet the box
  if (remaining == 0) {
    out.push_back(current);
    return;
  }
  for (int s = 1; s <= system.map_count(); ++s) {
    const auto& m = system.map(s);
    current.symbols.push_back(s);
    collect_support_words(system, peak, box_radius, acc.compose(m),
                          radius * m.upper_bound(), remaining - 1, current, out);
    current.symbols.pop_back();
  }
}

}  // namespace

AmplifyWitness amplify(CographSamplePtr sample, const SampledFunction& a, double eps,
                       int depth_cap) {
  const auto& grid = sample->grid();
  const auto& system = grid.system();
  if (!a.is_real(1e-12) || a.min_real() < -1e-12)
    throw InvalidInputError("amplify needs a positive real function");
  AmplifyWitness out;
  out.norm_a = a.sup_norm();
  if (!(out.norm_a > 0.0)) throw InvalidInputError("amplify needs a nonzero function");
  if (!(eps > 0.0 && eps < out.norm_a))
    throw InvalidInputError("amplify needs 0 < eps < ||a||");

  // peak and plateau box U0 (sup-norm box): every grid point strictly inside
  // the box has a > ||a|| - eps
  std::uint64_t peak_word = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t u = 0; u < grid.size(); ++u) {
    double v = a.at(u).real();
    if (v > best + 1e-15) {
      best = v;
      peak_word = u;
    }
  }
  out.peak = grid.point(peak_word);
  double rho0 = 4.0 * system.hull().radius;
  for (std::uint64_t u = 0; u < grid.size(); ++u)
    if (a.at(u).real() < out.norm_a - eps)
      rho0 = std::min(rho0, inf_dist(grid.point(u), out.peak));
  out.rho0 = rho0;

  // the guard band absorbs the truncation error of grid composition
  double guard = grid.tol() / 2.0;
  double rho1 = rho0 / 2.0;
  if (!(rho0 - guard > rho1))
    throw ResourceLimitError("grid too coarse: plateau radius " + std::to_string(rho0) +
                             " needs a guard band below " + std::to_string(rho0 / 2.0));

  // cell search: greedy descent toward the peak until the cell ball fits in
  // the U1 box (sup-norm containment per coordinate)
  ContractionMap acc(Mat::Identity(system.dimension(), system.dimension()),
                     Vec::Zero(system.dimension()));
  double radius = system.hull().radius;
  Word locator;
  auto cell_inside_box = [&](const Vec& center, double r) {
    for (int k = 0; k < center.size(); ++k)
      if (std::abs(center(k) - out.peak(k)) + r > rho1) return false;
    return true;
  };
  while (!cell_inside_box(acc.apply(system.hull().center), radius)) {
    if (static_cast<int>(locator.length()) >= depth_cap)
      throw ResourceLimitError("no cell inside the plateau within depth cap " +
                               std::to_string(depth_cap) + "; deepest cell radius " +
                               std::to_string(radius));
    int best_sym = 1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int s = 1; s <= system.map_count(); ++s) {
      Vec c = acc.compose(system.map(s)).apply(system.hull().center);
      double d = (c - out.peak).norm();
      if (d < best_dist - 1e-15) {
        best_dist = d;
        best_sym = s;
      }
    }
    acc = acc.compose(system.map(best_sym));
    radius *= system.map(best_sym).upper_bound();
    locator.symbols.push_back(best_sym);
  }
  out.locator = locator;
  out.tensor_depth = std::max<int>(1, static_cast<int>(locator.length()));
  const int n = out.tensor_depth;

  // cutoff g on the depth-n cograph: 1 inside the K1 box, 0 outside the
  // guarded U0 box, linear ramp between (sup-norm distances)
  double ramp_hi = rho0 - guard;
  auto h = [&](const Vec& x) {
    double d = inf_dist(x, out.peak);
    if (d <= rho1) return 1.0;
    if (d >= ramp_hi) return 0.0;
    return (ramp_hi - d) / (ramp_hi - rho1);
  };

  // sparse support: only words whose cells meet the plateau box carry mass
  std::vector<Word> support;
  Word scratch;
  collect_support_words(system, out.peak, ramp_hi,
                        ContractionMap(Mat::Identity(system.dimension(), system.dimension()),
                                       Vec::Zero(system.dimension())),
                        system.hull().radius, n, scratch, support);
  if (support.empty()) throw InternalError("amplify cutoff support came out empty");

  Eigen::MatrixXcd gvals(static_cast<long>(support.size()), static_cast<long>(grid.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    ContractionMap wm = system.word_map(support[k]);
    for (std::uint64_t u = 0; u < grid.size(); ++u)
      gvals(static_cast<long>(k), static_cast<long>(u)) =
          Complex(h(wm.apply(grid.point(u))), 0.0);
  }
  SparsePathFunction g(sample, n, support, std::move(gvals));

  SampledFunction b = sparse_inner_product(g, g);
  if (b.min_real() < 1.0 - 1e-9)
    throw InternalError("cutoff failed: (g|g)_A dropped below one");
  out.f = g.right_mul(b.real_pow(-0.5));

  SampledFunction c = sparse_phi_inner(a, out.f);
  out.attained_min = std::numeric_limits<double>::infinity();
  out.attained_max = -out.attained_min;
  for (std::uint64_t u = 0; u < grid.size(); ++u) {
    double v = c.at(u).real();
    out.attained_min = std::min(out.attained_min, v);
    out.attained_max = std::max(out.attained_max, v);
  }
  if (out.attained_min < out.norm_a - eps - 1e-9)
    throw InternalError("amplify postcondition failed: witness dipped below ||a|| - eps");
  return out;
}

SparsePathFunction normalize_witness(const SampledFunction& a, const AmplifyWitness& witness) {
  SampledFunction c = sparse_phi_inner(a, witness.f);
  if (c.min_real() <= 0.0)
    throw InternalError("normalize_witness: (f|phi(a)f)_A is not invertible at grid resolution");
  return witness.f.right_mul(c.real_pow(-0.5));
}

// ---------------------------------------------------------------------------
// separating_function

SeparatingFunction separating_function(const PathOperator& T, double eps,
                                       const Region& osc_witness, int depth_cap) {
  if (T.depth() < 1) throw InvalidInputError("separating_function needs operator depth >= 1");
  if (!(eps > 0.0)) throw InvalidInputError("separating_function needs eps > 0");
  const auto sample = T.sample_ptr();
  const auto& grid = sample->grid();
  const auto& system = grid.system();
  const int n = T.depth();
  const int m = grid.depth();
  if (system.map_count() < 2) throw InvalidInputError("needs at least two maps");

  Region v = osc_witness;
  if (v.kind == Region::Kind::HullInterior)
    v = Region::ball(system.hull().center, system.hull().radius);

  SeparatingFunction out;
  out.norm_T = T.op_norm();

  // witness f: constant-fiber top right singular vector at the argmax fiber
  std::uint64_t y0 = T.argmax_fiber();
  Eigen::MatrixXcd fiber = T.fiber_matrix(y0);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(fiber, Eigen::ComputeThinV);
  Eigen::VectorXcd vtop;
  if (out.norm_T > 0.0 && svd.singularValues().size() > 0) {
    vtop = svd.matrixV().col(0);
  } else {
    vtop = Eigen::VectorXcd::Zero(static_cast<long>(T.fiber_dim()));
    vtop[0] = 1.0;
  }
  // deterministic phase: make the largest entry real positive
  long arg = 0;
  vtop.cwiseAbs().maxCoeff(&arg);
  if (std::abs(vtop[arg]) > 0.0) vtop *= std::abs(vtop[arg]) / vtop[arg];
  Eigen::MatrixXcd fvals(static_cast<long>(T.fiber_dim()), static_cast<long>(grid.size()));
  for (long u = 0; u < fvals.cols(); ++u) fvals.col(u) = vtop;
  out.witness_f = PathFunction(sample, n, std::move(fvals));

  PathFunction tf = T.apply(out.witness_f);
  Eigen::VectorXd gvals(static_cast<long>(grid.size()));
  for (long u = 0; u < gvals.size(); ++u) gvals[u] = tf.values().col(u).squaredNorm();

  double cutoff = out.norm_T * out.norm_T - eps;

  // plateau box U0 around the argmax grid point
  Vec p0 = grid.point(y0);
  double rho0 = 4.0 * system.hull().radius;
  for (std::uint64_t u = 0; u < grid.size(); ++u)
    if (gvals[static_cast<long>(u)] <= cutoff)
      rho0 = std::min(rho0, inf_dist(grid.point(u), p0));

  // y1: a grid point strictly inside V and inside U0
  std::int64_t y1 = -1;
  double y1_dist = rho0;
  for (std::uint64_t u = 0; u < grid.size(); ++u) {
    double d = inf_dist(grid.point(u), p0);
    if (d < y1_dist && region_contains_point(v, grid.point(u), -1e-12)) {
      y1 = static_cast<std::int64_t>(u);
      y1_dist = d;
    }
  }
  if (y1 < 0)
    throw ResourceLimitError("witness region misses the norm plateau at grid resolution");
  Vec p1 = grid.point(static_cast<std::uint64_t>(y1));
  double rho1 = rho0 - y1_dist;

  // locator: greedy descent toward y1 until the cell ball fits in the U1 box
  ContractionMap acc(Mat::Identity(system.dimension(), system.dimension()),
                     Vec::Zero(system.dimension()));
  double radius = system.hull().radius;
  Word locator;
  auto inside_u1 = [&](const Vec& center, double r) {
    for (int k = 0; k < center.size(); ++k)
      if (std::abs(center(k) - p1(k)) + r > rho1) return false;
    return true;
  };
  while (locator.empty() || !inside_u1(acc.apply(system.hull().center), radius)) {
    int r_now = static_cast<int>(locator.length());
    if (r_now >= depth_cap || r_now + 2 * n > m)
      throw ResourceLimitError(
          "no cell inside the plateau within the admissible word length (need r + 2n <= grid "
          "depth; reached r = " + std::to_string(r_now) + ")");
    int best_sym = 1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int s = 1; s <= system.map_count(); ++s) {
      Vec c = acc.compose(system.map(s)).apply(system.hull().center);
      double d = (c - p1).norm();
      if (d < best_dist - 1e-15) {
        best_dist = d;
        best_sym = s;
      }
    }
    acc = acc.compose(system.map(best_sym));
    radius *= system.map(best_sym).upper_bound();
    locator.symbols.push_back(best_sym);
  }
  out.locator = locator;
  const int r = static_cast<int>(locator.length());

  // the proof's constants: append 2, then n-1 ones
  out.full_word = locator;
  out.full_word.symbols.push_back(2);
  for (int k = 1; k < n; ++k) out.full_word.symbols.push_back(1);

  // suffix word s2 = full_word padded with ones to length m - n
  Word s2 = out.full_word;
  while (static_cast<int>(s2.length()) < m - n) s2.symbols.push_back(1);
  Vec bump_center = apply_word(system, s2, grid.base_point());
  out.bump_center = bump_center;
  out.bump_halfwidth = system.word_map(out.full_word).upper_bound() * system.hull().radius;

  // bump over suffix words, gated to the full-word cell
  WordTable suffix_table(system.map_count(), m - n);
  std::uint64_t gate_prefix = 0;
  for (int s : out.full_word.symbols)
    gate_prefix = gate_prefix * static_cast<std::uint64_t>(system.map_count()) +
                  static_cast<std::uint64_t>(s - 1);
  std::uint64_t gate_div = pow_u64(system.map_count(), (m - n) - (r + n));
  auto bump = [&](const Vec& x) {
    double d = inf_dist(x, bump_center);
    return std::max(0.0, 1.0 - d / out.bump_halfwidth);
  };

  // a[v] = bump(point of the suffix of v); word-gated support makes the
  // beta-iterate supports disjoint as word sets
  Eigen::VectorXcd avals = Eigen::VectorXcd::Zero(static_cast<long>(grid.size()));
  std::uint64_t words_front = pow_u64(system.map_count(), n);
  std::uint64_t suffix_size = suffix_table.size();
  std::vector<double> suffix_bump(suffix_size, 0.0);
  for (std::uint64_t s = 0; s < suffix_size; ++s) {
    if (s / gate_div != gate_prefix) continue;
    suffix_bump[s] = bump(apply_word(system, suffix_table.word_at(s), grid.base_point()));
  }
  for (std::uint64_t w = 0; w < words_front; ++w)
    for (std::uint64_t s = 0; s < suffix_size; ++s) {
      if (suffix_bump[s] == 0.0) continue;
      avals[static_cast<long>(w * suffix_size + s)] = suffix_bump[s];
    }
  SampledFunction a(sample->grid_ptr(), std::move(avals));

  auto cert = certify_invariant(a, n, 1e-9);
  if (std::holds_alternative<InvarianceFailure>(cert))
    throw InternalError("separating function failed its own invariance certificate");
  out.a = std::get<InvariantFunction>(cert);

  // disjointness of the beta-iterate supports, checked exactly
  for (int p = 1; p < n; ++p)
    for (int q = p + 1; q <= n; ++q) {
      const auto& bp = out.a.iterate(p);
      const auto& bq = out.a.iterate(q);
      for (std::uint64_t u = 0; u < grid.size(); ++u)
        if (bp.at(u) != Complex(0.0, 0.0) && bq.at(u) != Complex(0.0, 0.0))
          throw InternalError("beta-iterate supports overlap at a grid point");
    }

  // attained norm bound || phi(a) T f ||_2^2
  Eigen::MatrixXcd phiatf(tf.values().rows(), tf.values().cols());
  WordTable front_table(system.map_count(), n);
  for (std::uint64_t w = 0; w < words_front; ++w) {
    Word word = front_table.word_at(w);
    for (std::uint64_t u = 0; u < grid.size(); ++u)
      phiatf(static_cast<long>(w), static_cast<long>(u)) =
          a.at(grid.compose_word(word, u)) * tf.at(w, u);
  }
  double attained = 0.0;
  for (long u = 0; u < phiatf.cols(); ++u)
    attained = std::max(attained, phiatf.col(u).squaredNorm());
  out.attained = attained;
  if (!(attained > out.norm_T * out.norm_T - eps))
    throw InternalError("separating function failed the norm retention contract");
  return out;
}

}  // namespace selfsim
