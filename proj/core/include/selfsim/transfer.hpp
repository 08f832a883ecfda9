#pragma once

#include <optional>
#include <variant>

#include "selfsim/bimodule.hpp"
#include "selfsim/geometry.hpp"

namespace selfsim {

/// beta_i(a)(y) = a(gamma_i(y)), realized on the grid by word truncation.
SampledFunction beta(int symbol, const SampledFunction& a);

/// E(a) = (1/N) sum_i beta_i(a); unital and positive.
SampledFunction transfer_op(const SampledFunction& a);

/// A function certified to take equal values along all words of each length
/// k <= depth, with the well-defined iterates beta^k attached.
struct InvariantFunction {
  SampledFunction fn;
  int depth = 0;
  double tol = 0.0;
  double worst_spread = 0.0;
  std::vector<SampledFunction> iterates;  // iterates[k-1] = beta^k(fn), k = 1..depth

  const SampledFunction& iterate(int k) const { return iterates[static_cast<std::size_t>(k - 1)]; }
};

struct InvarianceFailure {
  int length = 0;             // word length at which the certificate failed
  Word w, v;                  // worst violating word pair
  std::uint64_t grid_word = 0;
  double spread = 0.0;
};

/// Checks invariance at all grid points for all word pairs of each length up
/// to n, and the descent property (length-n invariance implies length-(n-1))
/// as an internal consistency assert.
std::variant<InvariantFunction, InvarianceFailure> certify_invariant(
    const SampledFunction& a, int n, double tol, std::uint64_t cap = (1u << 24));

/// || phi(a) f - f . beta(a) ||_2; within certification tolerance for a
/// certified invariant of depth >= 1.
double commutation_check(const InvariantFunction& a, const CographFunction& f);

/// Iterated form on Y_n: || phi_n(a) F - F . beta^n(a) ||_2.
double commutation_check_path(const InvariantFunction& a, const PathFunction& f);

/// Witness for the amplification bound ||a|| - eps <= (f | phi(a) f)_A <= ||a||:
/// locates the peak of `a`, shrinks a cell inside the plateau, cuts off on
/// the depth-n cograph and normalizes. The witness is sparse: its cutoff
/// vanishes off the cells meeting the plateau box. Provenance fields record
/// the choices made.
struct AmplifyWitness {
  SparsePathFunction f;
  int tensor_depth = 0;     // n
  Word locator;             // word v with cell(v) inside U1
  Vec peak;                 // x0, the located maximum
  double norm_a = 0.0;
  double rho0 = 0.0;        // radius of the plateau box U0
  double attained_min = 0.0, attained_max = 0.0;  // range of (f|phi(a)f)_A
};

AmplifyWitness amplify(CographSamplePtr sample, const SampledFunction& a, double eps,
                       int depth_cap = 40);

/// u = f c^{-1/2} with c = (f|phi(a)f)_A; (u|phi(a)u)_A = 1 and
/// ||u||_2 <= (||a|| - eps)^{-1/2}.
SparsePathFunction normalize_witness(const SampledFunction& a, const AmplifyWitness& witness);

/// The separating-function construction: a positive, word-invariant a with
/// disjoint beta-iterate supports whose left action nearly preserves the
/// norm of a given operator on Y_n.
struct SeparatingFunction {
  InvariantFunction a;
  PathFunction witness_f;      // unit vector with ||T f||_2^2 > ||T||^2 - eps
  double norm_T = 0.0;
  double attained = 0.0;       // || phi(a) T f ||_2^2
  Word locator;                // (j_1, ..., j_r)
  Word full_word;              // (j_1, ..., j_r, 2, 1, ..., 1), length r + n
  Vec bump_center;             // y2
  double bump_halfwidth = 0.0;
};

SeparatingFunction separating_function(const PathOperator& T, double eps,
                                       const Region& osc_witness, int depth_cap = 40);

}  // namespace selfsim
