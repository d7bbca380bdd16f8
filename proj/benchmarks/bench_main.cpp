#include "freelab/basis.hpp"
#include "freelab/circle_search.hpp"
#include "freelab/extensional.hpp"
#include "freelab/transport.hpp"

#include <benchmark/benchmark.h>

using namespace freelab;

namespace {

void BM_KrNormMolecule(benchmark::State& state) {
  const auto c = build_circle(static_cast<int>(state.range(0)));
  const Measure mol = Measure::molecule(c, 1, c.size() / 2);
  for (auto _ : state) {
    auto v = kr_norm(mol);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_KrNormMolecule)->Arg(10)->Arg(16)->Arg(64);

void BM_KrNormDual(benchmark::State& state) {
  const auto c = build_circle(static_cast<int>(state.range(0)));
  const Measure mu(c, {{1, Rational(1)}, {2, Rational(1)}, {3, Rational(-2)}});
  for (auto _ : state) {
    auto v = kr_norm_dual(mu, WitnessMode::None);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_KrNormDual)->Arg(10)->Arg(16);

void BM_OperatorNormExtension(benchmark::State& state) {
  const CircleUnionEnumeration en(2);
  const auto t = extension_operator(en, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto v = operator_norm(t);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_OperatorNormExtension)->Arg(5)->Arg(12)->Arg(20);

void BM_LipConstants(benchmark::State& state) {
  const auto g = build_grid_net(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) {
    auto sys = grid_row_major_system(g, static_cast<int>(state.range(0)), 2);
    benchmark::DoNotOptimize(sys.max_lip());
  }
}
BENCHMARK(BM_LipConstants)->Arg(3)->Arg(6);

void BM_SearchNodes(benchmark::State& state) {
  const auto target = LipTarget::exact(Rational(3, 2));
  for (auto _ : state) {
    auto cert = certify_circle_lower_bound(static_cast<int>(state.range(0)), target, {});
    benchmark::DoNotOptimize(cert.nodes_explored);
  }
}
BENCHMARK(BM_SearchNodes)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SignedSumNorm(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto g = build_grid_net(m, 2);
  const auto sys = grid_row_major_system(g, m, 2);
  const auto fam = projections_from_system(sys);
  std::vector<int> eps(fam.levels());
  for (int i = 0; i < fam.levels(); ++i) eps[i] = i % 2 ? -1 : 1;
  for (auto _ : state) {
    auto v = signed_sum_norm(fam, eps);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_SignedSumNorm)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
