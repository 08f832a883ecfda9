#include "selfsim/rng.hpp"

#include <cmath>

namespace selfsim {

namespace {

constexpr double kTau = 6.283185307179586;

struct TrigTerm {
  Vec freq;
  double phase;
  Complex coeff;
};

std::vector<TrigTerm> random_terms(Rng& rng, int dim, int count, bool complex_valued,
                                   double freq_scale) {
  std::vector<TrigTerm> terms;
  terms.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    TrigTerm t;
    t.freq = Vec(dim);
    for (int d = 0; d < dim; ++d) t.freq(d) = rng.uniform(-freq_scale, freq_scale);
    t.phase = rng.uniform(0.0, kTau);
    t.coeff = complex_valued ? Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
                             : Complex(rng.uniform(-1.0, 1.0), 0.0);
    terms.push_back(std::move(t));
  }
  return terms;
}

Complex eval_terms(const std::vector<TrigTerm>& terms, const Vec& x) {
  Complex acc = 0.0;
  for (const auto& t : terms) acc += t.coeff * std::cos(t.freq.dot(x) + t.phase);
  return acc;
}

}  // namespace

SampledFunction random_sampled_function(GridPtr grid, Rng& rng, bool complex_valued) {
  auto terms = random_terms(rng, grid->system().dimension(), 4, complex_valued, 2.0);
  return SampledFunction::from_function(
      std::move(grid), [terms](const Vec& x) { return eval_terms(terms, x); });
}

SampledFunction random_positive_function(GridPtr grid, Rng& rng, double floor,
                                         double freq_scale) {
  auto terms = random_terms(rng, grid->system().dimension(), 2, true, freq_scale);
  return SampledFunction::from_function(std::move(grid), [terms, floor](const Vec& x) {
    Complex v = eval_terms(terms, x);
    return Complex(std::norm(v) + floor, 0.0);
  });
}

CographFunction random_cograph_function(CographSamplePtr sample, Rng& rng) {
  int dim = sample->grid().system().dimension();
  auto tx = random_terms(rng, dim, 3, true, 2.0);
  auto ty = random_terms(rng, dim, 3, true, 2.0);
  return CographFunction::from_function(
      std::move(sample), [tx, ty](const Vec& x, const Vec& y) {
        return eval_terms(tx, x) + eval_terms(tx, x) * eval_terms(ty, y);
      });
}

PathFunction random_gn_function(CographSamplePtr sample, int depth, Rng& rng) {
  int dim = sample->grid().system().dimension();
  auto tx = random_terms(rng, dim, 3, true, 2.0);
  auto ty = random_terms(rng, dim, 3, true, 2.0);
  return gn_function(std::move(sample), depth, [tx, ty](const Vec& x, const Vec& y) {
    return eval_terms(tx, x) + eval_terms(tx, x) * eval_terms(ty, y);
  });
}

PathOperator random_finite_rank_operator(CographSamplePtr sample, int depth, int rank,
                                         Rng& rng) {
  const auto& grid = sample->grid();
  WordTable table(grid.system().map_count(), depth);
  int dim = grid.system().dimension();
  std::vector<std::pair<PathFunction, PathFunction>> pairs;
  for (int k = 0; k < rank; ++k) {
    Eigen::MatrixXcd xi(static_cast<long>(table.size()), static_cast<long>(grid.size()));
    Eigen::MatrixXcd eta(static_cast<long>(table.size()), static_cast<long>(grid.size()));
    for (std::uint64_t w = 0; w < table.size(); ++w) {
      Complex c_xi(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      Complex c_eta(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      auto t_xi = random_terms(rng, dim, 2, true, 0.5);
      auto t_eta = random_terms(rng, dim, 2, true, 0.5);
      for (std::uint64_t u = 0; u < grid.size(); ++u) {
        xi(static_cast<long>(w), static_cast<long>(u)) =
            c_xi + 0.25 * eval_terms(t_xi, grid.point(u));
        eta(static_cast<long>(w), static_cast<long>(u)) =
            c_eta + 0.25 * eval_terms(t_eta, grid.point(u));
      }
    }
    pairs.emplace_back(PathFunction(sample, depth, std::move(xi)),
                       PathFunction(sample, depth, std::move(eta)));
  }
  // normalize to unit operator norm so epsilon thresholds mean the same
  // thing across draws
  double norm = PathOperator::finite_rank(pairs).op_norm();
  if (norm > 1e-9)
    for (auto& [xi, eta] : pairs) xi = xi * Complex(1.0 / norm, 0.0);
  return PathOperator::finite_rank(std::move(pairs));
}

}  // namespace selfsim
