#include "selfsim/verify.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "selfsim/errors.hpp"
#include "selfsim/rng.hpp"
#include "selfsim/transfer.hpp"

namespace selfsim {

namespace {

CographSamplePtr sample_for(const RegistryEntry& entry) {
  static std::map<std::string, CographSamplePtr> cache;
  auto it = cache.find(entry.name);
  if (it != cache.end()) return it->second;
  auto sample = make_cograph_sample(make_grid(entry.system, entry.grid_depth));
  cache.emplace(entry.name, sample);
  return sample;
}

// Shift a positive function so its peak is exactly one. Shifting (rather
// than scaling) keeps the absolute curvature, so the epsilon plateaus stay
// resolvable on the grid.
SampledFunction unit_peak(SampledFunction a) {
  double sup = a.sup_norm();
  if (sup > 1.0) a = a * Complex(1.0 / sup, 0.0);
  return a + SampledFunction::constant(a.grid_ptr(), Complex(1.0 - a.sup_norm(), 0.0));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// --- criterion 1: the golden example table ---------------------------------

CheckResult criterion_registry_table(int depth, double tol) {
  CheckResult out{.name = "criterion 1: golden example table at depth " +
                          std::to_string(depth)};
  RegistryVerifyResult table = registry_verify(depth, tol);
  out.pass = table.pass && table.seconds < 60.0;
  out.worst = table.seconds;
  std::string bad;
  for (const auto& row : table.rows)
    if (!row.pass) bad += row.name + " [" + row.deltas + "] ";
  out.detail = bad.empty() ? "all " + std::to_string(table.rows.size()) + " systems match in " +
                                 fmt(table.seconds) + " s"
                           : bad;
  if (table.seconds >= 60.0) out.detail += " (over the 60 s budget)";
  return out;
}

// --- criterion 2: #B = dim(A/I_X) for finite branch sets -------------------

CheckResult criterion_branch_dimension() {
  CheckResult out{.name = "criterion 2: #B equals dim(A/I_X) on finite-branch systems"};
  out.pass = true;
  for (const auto& entry : builtin_registry()) {
    if (entry.expect_branch != ExpectedBranch::Finite) continue;
    ClassificationReport report = classify(entry.system, 10, 1e-9, entry.osc_witness);
    bool ok = report.branch.cardinality == BranchCardinality::Finite &&
              report.branch.finite_count == entry.expect_branch_count &&
              report.dim_A_mod_IX == entry.expect_branch_count;
    if (!ok) {
      out.pass = false;
      out.detail += entry.name + " expected " + std::to_string(entry.expect_branch_count) +
                    ", got " + std::to_string(report.branch.finite_count) + "; ";
    }
  }
  if (out.pass) out.detail = "tent: 1, gasket-modified: 3";
  return out;
}

// --- criterion 3: norm equivalence ------------------------------------------

CheckResult criterion_norm_equivalence(std::uint64_t seed) {
  CheckResult out{.name = "criterion 3: sup-norm / 2-norm equivalence, 200 samples per system"};
  out.pass = true;
  double slack = 1e-12;
  for (const auto& entry : builtin_registry()) {
    auto sample = sample_for(entry);
    double root_n = std::sqrt(static_cast<double>(entry.system.map_count()));
    Rng rng(seed ^ entry.system.content_hash());
    for (int k = 0; k < 200; ++k) {
      CographFunction f = random_cograph_function(sample, rng);
      double sup = f.sup_norm();
      double two = norm2(f);
      double lo = two - sup;                 // must be >= 0
      double hi = root_n * sup - two;        // must be >= 0
      out.worst = std::min(out.worst, std::min(lo, hi));
      if (lo < -slack * std::max(1.0, sup) || hi < -slack * std::max(1.0, sup)) {
        out.pass = false;
        out.detail += entry.name + " sample " + std::to_string(k) + " violates the sandwich; ";
      }
    }
  }
  if (out.pass) out.detail = "zero violations";
  return out;
}

// --- criterion 4: tensor power / path space isometry ------------------------

CheckResult criterion_isometry(std::uint64_t seed) {
  CheckResult out{.name =
                      "criterion 4: tensor inner product matches the path space, n = 1, 2, 3"};
  out.pass = true;
  const double tol = 1e-10;
  for (const auto& entry : builtin_registry()) {
    auto sample = sample_for(entry);
    Rng rng(seed ^ (entry.system.content_hash() * 3));
    for (int n = 1; n <= 3; ++n) {
      for (int rep = 0; rep < 50; ++rep) {
        std::vector<CographFunction> fs, gs;
        for (int k = 0; k < n; ++k) {
          fs.push_back(random_cograph_function(sample, rng));
          gs.push_back(random_cograph_function(sample, rng));
        }
        SampledFunction lhs = tensor_inner_product(fs, gs);
        SampledFunction rhs = path_inner_product(tensor_to_path(fs), tensor_to_path(gs));
        double dev = (lhs - rhs).sup_norm();
        out.worst = std::max(out.worst, dev);
        if (dev > tol) {
          out.pass = false;
          out.detail += entry.name + " n=" + std::to_string(n) + " rep " +
                        std::to_string(rep) + " dev " + fmt(dev) + "; ";
        }
      }
    }
  }
  if (out.pass) out.detail = "max deviation " + fmt(out.worst);
  return out;
}

// --- criterion 5: compactness dichotomy on the tent system ------------------

CheckResult criterion_compact_dichotomy(std::uint64_t seed) {
  CheckResult out{.name = "criterion 5: compact approximation dichotomy on the tent system"};
  out.pass = true;
  const RegistryEntry* tent = find_registry_entry("tent");
  auto sample = sample_for(*tent);
  BranchReport branch = branch_scan(tent->system, 10, 1e-9);

  // (a) support away from the branch point: residual small and decreasing
  SampledFunction away = SampledFunction::from_function(
      sample->grid_ptr(), [](const Vec& x) {
        return Complex(std::max(0.0, 1.0 - std::abs(x(0) - 0.75) / 0.15), 0.0);
      });
  double prev = std::numeric_limits<double>::infinity();
  double final_residual = 0.0;
  for (int depth = 4; depth <= 8; ++depth) {
    CompactApproxResult res = compact_approx(away, branch, depth, true, sample, 50, seed);
    if (!res.ok) {
      out.pass = false;
      out.detail += "clean support reported as obstructed at depth " + std::to_string(depth) +
                    "; ";
      break;
    }
    if (res.residual > prev * 1.1 + 1e-12) {
      out.pass = false;
      out.detail += "residual not decreasing at depth " + std::to_string(depth) + " (" +
                    fmt(res.residual) + " after " + fmt(prev) + "); ";
    }
    prev = res.residual;
    final_residual = res.residual;
  }
  if (final_residual > 0.02) {
    out.pass = false;
    out.detail += "residual " + fmt(final_residual) + " above 0.02 at depth 8; ";
  }
  out.worst = final_residual;

  // (b) unit mass on the branch point: certified probe obstruction for every
  // constructed candidate
  SampledFunction on_branch = SampledFunction::from_function(
      sample->grid_ptr(), [](const Vec& x) {
        return Complex(std::max(0.0, 1.0 - std::abs(x(0) - 0.5) / 0.1), 0.0);
      });
  const double bound = 1.0 / (4.0 * std::sqrt(2.0)) - 0.05;
  for (int depth = 4; depth <= 9; ++depth) {
    CompactApproxResult res = compact_approx(on_branch, branch, depth, true, sample, 50, seed);
    if (res.ok) {
      out.pass = false;
      out.detail += "branch-supported function accepted at depth " + std::to_string(depth) + "; ";
      continue;
    }
    if (res.probe_lower_bound < bound) {
      out.pass = false;
      out.detail += "probe bound " + fmt(res.probe_lower_bound) + " below " + fmt(bound) +
                    " at depth " + std::to_string(depth) + "; ";
    }
  }
  if (out.pass)
    out.detail = "residual " + fmt(final_residual) + " at depth 8; obstruction bound holds";
  return out;
}

// --- criterion 6: amplification witnesses -----------------------------------

CheckResult criterion_amplify(std::uint64_t seed) {
  CheckResult out{.name = "criterion 6: amplification and normalization witnesses"};
  out.pass = true;
  const double tol = 1e-9;
  for (const auto& entry : builtin_registry()) {
    auto sample = sample_for(entry);
    Rng rng(seed ^ (entry.system.content_hash() * 5));
    for (double eps : {0.05, 0.1, 0.2}) {
      for (int rep = 0; rep < 10; ++rep) {
        SampledFunction a = unit_peak(random_positive_function(sample->grid_ptr(), rng));
        std::string tag = entry.name + " eps=" + fmt(eps) + " rep " + std::to_string(rep);
        try {
          AmplifyWitness w = amplify(sample, a, eps);
          SampledFunction ff = sparse_inner_product(w.f, w.f);
          double unit_dev = 0.0;
          for (std::uint64_t u = 0; u < ff.size(); ++u)
            unit_dev = std::max(unit_dev, std::abs(ff.at(u) - Complex(1.0, 0.0)));
          out.worst = std::max(out.worst, unit_dev);
          if (unit_dev > tol) {
            out.pass = false;
            out.detail += tag + ": (f|f) off unity by " + fmt(unit_dev) + "; ";
          }
          if (w.attained_min < w.norm_a - eps - tol || w.attained_max > w.norm_a + tol) {
            out.pass = false;
            out.detail += tag + ": witness range [" + fmt(w.attained_min) + ", " +
                          fmt(w.attained_max) + "] outside [" + fmt(w.norm_a - eps) + ", " +
                          fmt(w.norm_a) + "]; ";
          }
          SparsePathFunction u = normalize_witness(a, w);
          SampledFunction uau = sparse_phi_inner(a, u);
          double norm_dev = 0.0;
          for (std::uint64_t k = 0; k < uau.size(); ++k)
            norm_dev = std::max(norm_dev, std::abs(uau.at(k) - Complex(1.0, 0.0)));
          if (norm_dev > tol) {
            out.pass = false;
            out.detail += tag + ": (u|phi(a)u) off unity by " + fmt(norm_dev) + "; ";
          }
          double u2 = norm2(u);
          double cap = std::pow(w.norm_a - eps, -0.5) + tol;
          if (u2 > cap) {
            out.pass = false;
            out.detail += tag + ": ||u||_2 = " + fmt(u2) + " above " + fmt(cap) + "; ";
          }
        } catch (const std::exception& e) {
          out.pass = false;
          out.detail += tag + ": " + e.what() + "; ";
        }
      }
    }
  }
  if (out.pass) out.detail = "all witnesses within bounds (worst unity dev " + fmt(out.worst) + ")";
  return out;
}

// --- criterion 7: separating functions --------------------------------------

CheckResult criterion_separating(std::uint64_t seed) {
  CheckResult out{.name = "criterion 7: separating functions for n = 1, 2, 3"};
  out.pass = true;
  const double eps = 0.1;
  for (const std::string name : {"tent", "cantor", "gasket-modified"}) {
    const RegistryEntry* entry = find_registry_entry(name);
    auto sample = sample_for(*entry);
    Rng rng(seed ^ (entry->system.content_hash() * 7));
    for (int n = 1; n <= 3; ++n) {
      for (int t_kind = 0; t_kind < 3; ++t_kind) {
        std::string tag = name + " n=" + std::to_string(n) + " T#" + std::to_string(t_kind);
        try {
          PathOperator T = [&]() {
            switch (t_kind) {
              case 0: return PathOperator::identity(sample, n);
              case 1:
                return PathOperator::left_mult(
                    unit_peak(random_positive_function(sample->grid_ptr(), rng)), sample, n);
              default: return random_finite_rank_operator(sample, n, 2, rng);
            }
          }();
          SeparatingFunction s = separating_function(T, eps, *entry->osc_witness);
          if (s.a.worst_spread > 1e-9) {
            out.pass = false;
            out.detail += tag + ": invariance spread " + fmt(s.a.worst_spread) + "; ";
          }
          // disjointness, exact at the grid
          for (int p = 1; p < n; ++p)
            for (int q = p + 1; q <= n; ++q) {
              const auto& bp = s.a.iterate(p);
              const auto& bq = s.a.iterate(q);
              for (std::uint64_t u = 0; u < bp.size(); ++u)
                if (std::abs(bp.at(u) * bq.at(u)) != 0.0) {
                  out.pass = false;
                  out.detail += tag + ": beta-iterate product not exactly zero; ";
                  p = q = n + 1;
                  break;
                }
            }
          if (!(s.attained > s.norm_T * s.norm_T - eps)) {
            out.pass = false;
            out.detail += tag + ": attained " + fmt(s.attained) + " not above " +
                          fmt(s.norm_T * s.norm_T - eps) + "; ";
          }
        } catch (const std::exception& e) {
          out.pass = false;
          out.detail += tag + ": " + e.what() + "; ";
        }
      }
    }
  }
  if (out.pass) out.detail = "all contracts hold exactly";
  return out;
}

// --- criterion 8: the transfer identity --------------------------------------

CheckResult criterion_transfer_identity(std::uint64_t seed) {
  CheckResult out{.name = "criterion 8: E(a) = (xi0 | phi(a) xi0)_A, 100 samples per system"};
  out.pass = true;
  const double tol = 1e-12;
  for (const auto& entry : builtin_registry()) {
    auto sample = sample_for(entry);
    CographFunction unit = xi0(sample);
    Rng rng(seed ^ (entry.system.content_hash() * 11));
    for (int rep = 0; rep < 100; ++rep) {
      SampledFunction a = random_sampled_function(sample->grid_ptr(), rng);
      SampledFunction lhs = transfer_op(a);
      SampledFunction rhs = inner_product(unit, left_action(a, unit));
      double dev = (lhs - rhs).sup_norm();
      out.worst = std::max(out.worst, dev);
      if (dev > tol) {
        out.pass = false;
        out.detail += entry.name + " rep " + std::to_string(rep) + " dev " + fmt(dev) + "; ";
      }
    }
  }
  if (out.pass) out.detail = "max deviation " + fmt(out.worst);
  return out;
}

// --- criterion 9: declared out of computational reach ------------------------

CheckResult criterion_declared() {
  CheckResult out{.name = "criterion 9: declared non-reproducible facts"};
  out.pass = true;
  out.detail =
      "simplicity / pure infiniteness, nuclearity / UCT, and K-group values are not verified "
      "computationally; they are covered by the constructive criteria 5-8 and metadata echo "
      "only";
  return out;
}

// --- extra module checks shared by the suites --------------------------------

CheckResult check_sesquilinear(std::uint64_t seed) {
  CheckResult out{.name = "inner product: positivity, symmetry, module linearity, adjoints"};
  out.pass = true;
  const double tol = 1e-10;
  for (const auto& entry : builtin_registry()) {
    auto sample = sample_for(entry);
    Rng rng(seed ^ (entry.system.content_hash() * 13));
    for (int rep = 0; rep < 20; ++rep) {
      CographFunction f = random_cograph_function(sample, rng);
      CographFunction g = random_cograph_function(sample, rng);
      SampledFunction a = random_sampled_function(sample->grid_ptr(), rng);

      SampledFunction ff = inner_product(f, f);
      for (std::uint64_t u = 0; u < ff.size(); ++u)
        if (ff.at(u).real() < -tol || std::abs(ff.at(u).imag()) > tol) out.pass = false;

      double dev = 0.0;
      dev = std::max(dev, (inner_product(f, g) - inner_product(g, f).conjugate()).sup_norm());
      dev = std::max(dev,
                     (inner_product(f, right_action(g, a)) - inner_product(f, g) * a).sup_norm());
      dev = std::max(dev, (inner_product(right_action(f, a), g) -
                           inner_product(f, g) * a.conjugate())
                              .sup_norm());
      // adjointability of the left action
      dev = std::max(dev, (inner_product(left_action(a, f), g) -
                           inner_product(f, left_action(a.conjugate(), g)))
                              .sup_norm());
      // rank one adjoint
      CographFunction z = random_cograph_function(sample, rng);
      CographFunction zp = random_cograph_function(sample, rng);
      dev = std::max(dev, (inner_product(rank_one_apply(f, g, z), zp) -
                           inner_product(z, rank_one_apply(g, f, zp)))
                              .sup_norm());
      out.worst = std::max(out.worst, dev);
      if (dev > tol) {
        out.pass = false;
        out.detail += entry.name + " rep " + std::to_string(rep) + " dev " + fmt(dev) + "; ";
      }
    }
  }
  if (out.pass) out.detail = "max deviation " + fmt(out.worst);
  return out;
}

CheckResult check_branch_consistency(std::uint64_t seed) {
  CheckResult out{.name = "operations preserve branch consistency exactly"};
  out.pass = true;
  for (const auto& entry : builtin_registry()) {
    auto sample = sample_for(entry);
    Rng rng(seed ^ (entry.system.content_hash() * 17));
    for (int rep = 0; rep < 10; ++rep) {
      CographFunction f = random_cograph_function(sample, rng);
      CographFunction g = random_cograph_function(sample, rng);
      SampledFunction a = random_sampled_function(sample->grid_ptr(), rng);
      double v = 0.0;
      v = std::max(v, f.branch_violation());
      v = std::max(v, left_action(a, f).branch_violation());
      v = std::max(v, right_action(f, a).branch_violation());
      v = std::max(v, rank_one_apply(f, g, g).branch_violation());
      v = std::max(v, (f + g).branch_violation());
      out.worst = std::max(out.worst, v);
      if (v != 0.0) {
        out.pass = false;
        out.detail += entry.name + " violation " + fmt(v) + "; ";
      }
    }
  }
  if (out.pass) out.detail = "exact agreement at every merged key";
  return out;
}

CheckResult check_xi0_and_pullback(std::uint64_t seed) {
  CheckResult out{.name = "xi0 unit vector and the cograph pullback embedding"};
  out.pass = true;
  const double tol = 1e-10;
  for (const auto& entry : builtin_registry()) {
    auto sample = sample_for(entry);
    CographFunction unit = xi0(sample);
    SampledFunction uu = inner_product(unit, unit);
    double dev = 0.0;
    for (std::uint64_t u = 0; u < uu.size(); ++u)
      dev = std::max(dev, std::abs(uu.at(u) - Complex(1.0, 0.0)));
    // pullback preserves inner products on depth-2 cograph functions
    Rng rng(seed ^ (entry.system.content_hash() * 19));
    int n = 2;
    PathFunction f = random_gn_function(sample, n, rng);
    PathFunction g = random_gn_function(sample, n, rng);
    PathFunction pf = cograph_pullback(f);
    PathFunction pg = cograph_pullback(g);
    dev = std::max(dev, (path_inner_product(pf, pg) - path_inner_product(f, g)).sup_norm());
    out.worst = std::max(out.worst, dev);
    if (dev > tol) {
      out.pass = false;
      out.detail += entry.name + " dev " + fmt(dev) + "; ";
    }
  }
  if (out.pass) out.detail = "max deviation " + fmt(out.worst);
  return out;
}

CheckResult check_transfer_basics(std::uint64_t seed) {
  CheckResult out{.name = "transfer map: unital, positive, multiplicative composition parts"};
  out.pass = true;
  const double tol = 1e-12;
  for (const auto& entry : builtin_registry()) {
    auto sample = sample_for(entry);
    auto grid = sample->grid_ptr();
    Rng rng(seed ^ (entry.system.content_hash() * 23));
    SampledFunction one = SampledFunction::constant(grid, 1.0);
    double dev = (transfer_op(one) - one).sup_norm();
    for (int rep = 0; rep < 20; ++rep) {
      SampledFunction a = random_sampled_function(grid, rng);
      SampledFunction b = random_sampled_function(grid, rng);
      for (int i = 1; i <= entry.system.map_count(); ++i)
        dev = std::max(dev, (beta(i, a * b) - beta(i, a) * beta(i, b)).sup_norm());
      // E as the average of the beta maps
      SampledFunction avg = beta(1, a);
      for (int i = 2; i <= entry.system.map_count(); ++i) avg = avg + beta(i, a);
      avg = avg * Complex(1.0 / entry.system.map_count(), 0.0);
      dev = std::max(dev, (transfer_op(a) - avg).sup_norm());
      // positivity
      SampledFunction pos = random_positive_function(grid, rng);
      if (transfer_op(pos).min_real() < -tol) {
        out.pass = false;
        out.detail += entry.name + ": E lost positivity; ";
      }
    }
    out.worst = std::max(out.worst, dev);
    if (dev > tol) {
      out.pass = false;
      out.detail += entry.name + " dev " + fmt(dev) + "; ";
    }
  }
  if (out.pass) out.detail = "max deviation " + fmt(out.worst);
  return out;
}

CheckResult check_invariance_machinery(std::uint64_t seed) {
  CheckResult out{.name = "invariance certificates, descent, commutation residuals"};
  out.pass = true;
  for (const auto& entry : builtin_registry()) {
    auto sample = sample_for(entry);
    auto grid = sample->grid_ptr();
    Rng rng(seed ^ (entry.system.content_hash() * 29));
    int n = std::min(2, grid->depth() - 1);

    // constant functions certify at any depth with zero spread
    auto cert_const = certify_invariant(SampledFunction::constant(grid, Complex(0.7, -0.2)), n,
                                        1e-12);
    if (!std::holds_alternative<InvariantFunction>(cert_const)) {
      out.pass = false;
      out.detail += entry.name + ": constant failed certification; ";
      continue;
    }

    // truncation-built invariants certify exactly and commute
    auto terms_fn = random_sampled_function(grid, rng);
    Eigen::VectorXcd vals(static_cast<long>(grid->size()));
    std::uint64_t block = pow_u64(entry.system.map_count(), n);
    for (std::uint64_t u = 0; u < grid->size(); ++u)
      vals[static_cast<long>(u)] = terms_fn.at(u % (grid->size() / block));
    // a depends only on the suffix of the grid word, so it is W_n-invariant
    SampledFunction a(grid, std::move(vals));
    auto cert = certify_invariant(a, n, 1e-12);
    if (!std::holds_alternative<InvariantFunction>(cert)) {
      out.pass = false;
      out.detail += entry.name + ": suffix function failed certification; ";
      continue;
    }
    const auto& inv = std::get<InvariantFunction>(cert);
    CographFunction f = random_cograph_function(sample, rng);
    double res = commutation_check(inv, f);
    out.worst = std::max(out.worst, res);
    if (res > 1e-10 * std::max(1.0, f.sup_norm())) {
      out.pass = false;
      out.detail += entry.name + ": commutation residual " + fmt(res) + "; ";
    }

    // negative control: the identity coordinate is not invariant on systems
    // with distinct map images of the base point
    SampledFunction coord = SampledFunction::from_function(
        grid, [](const Vec& x) { return Complex(x(0), 0.0); });
    auto bad = certify_invariant(coord, 1, 1e-6);
    if (std::holds_alternative<InvariantFunction>(bad)) {
      out.pass = false;
      out.detail += entry.name + ": coordinate certified as invariant; ";
    }
  }
  if (out.pass) out.detail = "certificates and residuals as expected";
  return out;
}

CheckResult check_verdict_monotonicity() {
  CheckResult out{.name = "graph separation verdicts stable across depths"};
  out.pass = true;
  for (const auto& entry : builtin_registry()) {
    Verdict first = Verdict::Undetermined;
    for (int depth : {4, 6, 8, 10}) {
      Verdict v = check_graph_separation(entry.system, depth).verdict;
      if (depth == 4) first = v;
      if (v != first) {
        out.pass = false;
        out.detail += entry.name + " flips at depth " + std::to_string(depth) + "; ";
      }
    }
  }
  if (out.pass) out.detail = "no verdict flips between depths 4 and 10";
  return out;
}

SuiteResult finish(SuiteResult suite,
                   std::chrono::steady_clock::time_point t0) {
  suite.pass = true;
  for (const auto& c : suite.checks) suite.pass = suite.pass && c.pass;
  suite.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return suite;
}

}  // namespace

SuiteResult run_bimodule_suite(std::uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  SuiteResult suite{.suite = "bimodule", .seed = seed};
  suite.checks.push_back(criterion_norm_equivalence(seed));
  suite.checks.push_back(criterion_isometry(seed));
  suite.checks.push_back(criterion_compact_dichotomy(seed));
  suite.checks.push_back(check_sesquilinear(seed));
  suite.checks.push_back(check_branch_consistency(seed));
  suite.checks.push_back(check_xi0_and_pullback(seed));
  return finish(std::move(suite), t0);
}

SuiteResult run_transfer_suite(std::uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  SuiteResult suite{.suite = "transfer", .seed = seed};
  suite.checks.push_back(criterion_transfer_identity(seed));
  suite.checks.push_back(check_transfer_basics(seed));
  suite.checks.push_back(check_invariance_machinery(seed));
  suite.checks.push_back(criterion_amplify(seed));
  suite.checks.push_back(criterion_separating(seed));
  return finish(std::move(suite), t0);
}

SuiteResult run_registry_suite(int depth, double tol) {
  auto t0 = std::chrono::steady_clock::now();
  SuiteResult suite{.suite = "registry", .seed = 0};
  suite.checks.push_back(criterion_registry_table(depth, tol));
  suite.checks.push_back(criterion_branch_dimension());
  suite.checks.push_back(check_verdict_monotonicity());
  return finish(std::move(suite), t0);
}

std::vector<CheckResult> run_acceptance(std::uint64_t seed) {
  std::vector<CheckResult> out;
  out.push_back(criterion_registry_table(10, 1e-9));
  out.push_back(criterion_branch_dimension());
  out.push_back(criterion_norm_equivalence(seed));
  out.push_back(criterion_isometry(seed));
  out.push_back(criterion_compact_dichotomy(seed));
  out.push_back(criterion_amplify(seed));
  out.push_back(criterion_separating(seed));
  out.push_back(criterion_transfer_identity(seed));
  out.push_back(criterion_declared());
  return out;
}

}  // namespace selfsim
