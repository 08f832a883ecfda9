#pragma once

#include <cstdint>

#include "selfsim/bimodule.hpp"

namespace selfsim {

/// splitmix64; fully specified so seeded runs are identical across
/// platforms and standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

private:
  std::uint64_t state_;
};

/// Smooth random scalar field: a short random trigonometric sum. Consistent
/// across duplicate grid points by construction.
SampledFunction random_sampled_function(GridPtr grid, Rng& rng, bool complex_valued = true);

/// Strictly positive smooth random field (|trig sum|^2 + floor). The
/// frequency scale bounds the peak curvature, which keeps the plateaus of
/// the amplification construction resolvable at grid scale.
SampledFunction random_positive_function(GridPtr grid, Rng& rng, double floor = 0.05,
                                         double freq_scale = 0.5);

/// Random cograph function from a smooth formula in (x, y); branch
/// consistent by construction.
CographFunction random_cograph_function(CographSamplePtr sample, Rng& rng);

/// Random function on the depth-n cograph sample (well defined pullback input).
PathFunction random_gn_function(CographSamplePtr sample, int depth, Rng& rng);

/// Random finite-rank operator on Y_n: per path word a constant coefficient
/// with a gentle smooth modulation in the base point, so the fiber norms vary
/// smoothly across the grid.
PathOperator random_finite_rank_operator(CographSamplePtr sample, int depth, int rank,
                                         Rng& rng);

}  // namespace selfsim
