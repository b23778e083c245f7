#include <benchmark/benchmark.h>

#include <memory>
#include <numbers>

#include "nctorus/bloch.hpp"
#include "nctorus/fixtures.hpp"
#include "nctorus/lattice.hpp"
#include "nctorus/response.hpp"
#include "nctorus/spectral.hpp"

using namespace nctorus;

namespace {

AlgebraElement qhz(int L, double lambda = 0.3) {
    const ModelFamily& f = reference_model("qhz");
    const TorusGeometry g({L, L, L}, f.orbitals);
    return build_hamiltonian({g, f.hoppings({{"beta", 0.3}}), FluxTensor{}, DisorderSpec{lambda, 1, 0}});
}

void BM_build_hamiltonian(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(qhz(L));
}
BENCHMARK(BM_build_hamiltonian)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_diagonalize(benchmark::State& state) {
    const AlgebraElement h = qhz(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(diagonalize(h, 0.0));
}
BENCHMARK(BM_diagonalize)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_derive(benchmark::State& state) {
    const AlgebraElement h = qhz(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(derive(h, 0));
}
BENCHMARK(BM_derive)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_chern2_integrand(benchmark::State& state) {
    const AlgebraElement h = qhz(static_cast<int>(state.range(0)));
    const AlgebraElement p = fermi_projector(h, 0.0);
    const AlgebraElement dtp = derive(p, 0);
    for (auto _ : state) benchmark::DoNotOptimize(chern2_integrand(p, dtp));
}
BENCHMARK(BM_chern2_integrand)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_ito_projector(benchmark::State& state) {
    const AlgebraElement h = qhz(static_cast<int>(state.range(0)));
    const SpectralData s = diagonalize(h, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(ito_projector_offdiag(h, s, 2));
}
BENCHMARK(BM_ito_projector)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_second_chern_4d(benchmark::State& state) {
    const auto f = std::make_shared<const ModelFamily>(reference_model("qhz"));
    const AdiabaticPath loop = AdiabaticPath::loop(f, {}, "m", "beta", 4.0, 0.0, 2.0);
    const TableLoop table = [&loop](double t) { return loop.hoppings(t); };
    const int grid = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(second_chern_4d(table, 0.0, grid, grid));
}
BENCHMARK(BM_second_chern_4d)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
