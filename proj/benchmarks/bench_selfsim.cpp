#include <benchmark/benchmark.h>

#include "selfsim/registry.hpp"
#include "selfsim/rng.hpp"
#include "selfsim/transfer.hpp"

namespace {

using namespace selfsim;

const IfsSystem& system_of(const char* name) { return find_registry_entry(name)->system; }

void BM_AttractorCells(benchmark::State& state) {
  const auto& system = system_of("gasket");
  int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    CellTree tree = attractor_cells(system, depth);
    benchmark::DoNotOptimize(tree.cells().size());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AttractorCells)->DenseRange(4, 10, 2)->Complexity();

void BM_Membership(benchmark::State& state) {
  const auto& system = system_of("carpet");
  CellTree tree(system, static_cast<int>(state.range(0)));
  Vec p(2);
  p << 1.0 / 3.0, 0.2;
  for (auto _ : state) benchmark::DoNotOptimize(tree.contains(p, 1e-9));
}
BENCHMARK(BM_Membership)->DenseRange(6, 12, 2);

void BM_BranchScan(benchmark::State& state) {
  const auto& system = system_of("carpet-modified");
  for (auto _ : state) {
    BranchReport report = branch_scan(system, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(report.pairs.size());
  }
}
BENCHMARK(BM_BranchScan)->DenseRange(6, 10, 2);

void BM_StrongSeparation(benchmark::State& state) {
  const auto& system = system_of("carpet");
  for (auto _ : state) {
    auto verdict = check_strong_separation(system, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(verdict.verdict);
  }
}
BENCHMARK(BM_StrongSeparation)->DenseRange(6, 10, 2);

void BM_InnerProduct(benchmark::State& state) {
  const auto* entry = find_registry_entry("gasket");
  auto sample = make_cograph_sample(make_grid(entry->system, static_cast<int>(state.range(0))));
  Rng rng(7);
  CographFunction f = random_cograph_function(sample, rng);
  CographFunction g = random_cograph_function(sample, rng);
  for (auto _ : state) benchmark::DoNotOptimize(inner_product(f, g).sup_norm());
}
BENCHMARK(BM_InnerProduct)->DenseRange(4, 8, 2);

void BM_TensorToPath(benchmark::State& state) {
  const auto* entry = find_registry_entry("gasket");
  auto sample = make_cograph_sample(make_grid(entry->system, 6));
  Rng rng(7);
  std::vector<CographFunction> fs;
  for (long k = 0; k < state.range(0); ++k) fs.push_back(random_cograph_function(sample, rng));
  for (auto _ : state) benchmark::DoNotOptimize(tensor_to_path(fs).sup_norm());
}
BENCHMARK(BM_TensorToPath)->DenseRange(1, 3, 1);

void BM_TransferOp(benchmark::State& state) {
  const auto* entry = find_registry_entry("carpet");
  auto grid = make_grid(entry->system, static_cast<int>(state.range(0)));
  Rng rng(7);
  SampledFunction a = random_sampled_function(grid, rng);
  for (auto _ : state) benchmark::DoNotOptimize(transfer_op(a).sup_norm());
}
BENCHMARK(BM_TransferOp)->DenseRange(2, 4, 1);

void BM_Amplify(benchmark::State& state) {
  const auto* entry = find_registry_entry("tent");
  auto sample = make_cograph_sample(make_grid(entry->system, entry->grid_depth));
  Rng rng(11);
  SampledFunction a = random_positive_function(sample->grid_ptr(), rng);
  for (auto _ : state) {
    AmplifyWitness w = amplify(sample, a, 0.1);
    benchmark::DoNotOptimize(w.attained_min);
  }
}
BENCHMARK(BM_Amplify);

}  // namespace

BENCHMARK_MAIN();
