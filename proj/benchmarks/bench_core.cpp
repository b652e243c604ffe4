#include <benchmark/benchmark.h>

#include "ginlab/edgestat.hpp"
#include "ginlab/kernels.hpp"
#include "ginlab/model.hpp"
#include "ginlab/numkit.hpp"
#include "ginlab/rng.hpp"
#include "ginlab/sampler.hpp"
#include "ginlab/specialfn.hpp"

using namespace ginlab;

namespace {

ComplexMatrix random_antisymmetric(int n, std::uint64_t seed) {
    rng::Stream s(seed);
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            m(i, j) = s.complex_normal();
            m(j, i) = -m(i, j);
        }
    return m;
}

void BM_Pfaffian(benchmark::State& state) {
    const int n = int(state.range(0));
    const ComplexMatrix m = random_antisymmetric(n, 1);
    for (auto _ : state) benchmark::DoNotOptimize(numkit::pfaffian(m));
}
BENCHMARK(BM_Pfaffian)->Arg(16)->Arg(64)->Arg(256);

void BM_Det(benchmark::State& state) {
    const int n = int(state.range(0));
    const ComplexMatrix m = random_antisymmetric(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(numkit::det_log(m));
}
BENCHMARK(BM_Det)->Arg(16)->Arg(64)->Arg(256);

void BM_IE(benchmark::State& state) {
    const double n = double(state.range(0));
    const cdouble z(1.2, 0.7);
    for (auto _ : state) benchmark::DoNotOptimize(specialfn::ie(n, z));
}
BENCHMARK(BM_IE)->Arg(0)->Arg(2)->Arg(5);

void BM_FKernel(benchmark::State& state) {
    const int n = int(state.range(0));
    const cdouble z(0.6, 0.4), w(-0.3, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(specialfn::f_kernel(n, z, w));
}
BENCHMARK(BM_FKernel)->Arg(0)->Arg(1)->Arg(2);

void BM_KEdge(benchmark::State& state) {
    const int t = int(state.range(0));
    const cdouble z(-0.4, 0.9), w(0.2, -0.5);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::k_edge(t, z, w));
}
BENCHMARK(BM_KEdge)->Arg(0)->Arg(2);

void BM_SampleDeformed(benchmark::State& state) {
    model::EnsembleConfig c;
    c.dyson_index = 2;
    c.dim = int(state.range(0));
    c.seed = 3;
    c.deformation.eigenvalues.push_back({cdouble(1, 0), {{1, 1}}});
    std::uint64_t replica = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(sampler::sample_deformed(c, replica++));
}
BENCHMARK(BM_SampleDeformed)->Arg(256)->Arg(1024);

void BM_WindowedSpectrum(benchmark::State& state) {
    model::EnsembleConfig c;
    c.dyson_index = 2;
    c.dim = int(state.range(0));
    c.seed = 5;
    c.deformation.eigenvalues.push_back({cdouble(1, 0), {{1, 1}}});
    const ComplexMatrix x = sampler::sample_deformed(c, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            edgestat::windowed_spectrum(x, cdouble(1, 0), 0.25));
}
BENCHMARK(BM_WindowedSpectrum)->Arg(256)->Arg(1024);

void BM_Kron(benchmark::State& state) {
    const int n = int(state.range(0));
    rng::Stream s(7);
    ComplexMatrix a(n, n), b(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            a(i, j) = s.complex_normal();
            b(i, j) = s.complex_normal();
        }
    for (auto _ : state) benchmark::DoNotOptimize(numkit::kron(a, b));
}
BENCHMARK(BM_Kron)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
