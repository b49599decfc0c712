#include <benchmark/benchmark.h>

#include "qpc/construct.hpp"
#include "qpc/erasure.hpp"
#include "qpc/product_sim.hpp"
#include "qpc/random.hpp"
#include "qpc/spectrum.hpp"

namespace {

using namespace qpc;

void BM_Rank(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    SplitMix64 rng(1);
    BitMatrix m(rows, 2 * rows);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < 2 * rows; ++j) {
            m.set(i, j, rng() & 1U);
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(rank(m));
    }
}
BENCHMARK(BM_Rank)->Arg(8)->Arg(64)->Arg(256);

void BM_OracleSpectrum(benchmark::State& state) {
    const Code c = panchenko(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle_spectrum(c, 1));
    }
}
BENCHMARK(BM_OracleSpectrum)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SpectrumByDoubling(benchmark::State& state) {
    const Code c = panchenko(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectrum_by_doubling(c));
    }
}
BENCHMARK(BM_SpectrumByDoubling)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_SRhoExact(benchmark::State& state) {
    const Code c = panchenko(7);
    EnumerationOptions opts;
    opts.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(s_rho_exact(c, static_cast<std::size_t>(state.range(0)), opts));
    }
}
BENCHMARK(BM_SRhoExact)->Arg(5)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_SRhoSampled(benchmark::State& state) {
    const BitMatrix h = panchenko(8).parity_check();
    for (auto _ : state) {
        benchmark::DoNotOptimize(s_rho_sampled(h, 7, 1'000'000, 3, 1));
    }
    state.SetItemsProcessed(state.iterations() * 1'000'000);
}
BENCHMARK(BM_SRhoSampled)->Unit(benchmark::kMillisecond);

void BM_DecodeProduct(benchmark::State& state) {
    const ProductCode pc = panchenko_product_72();
    const auto k = static_cast<std::size_t>(state.range(0));
    SplitMix64 rng(5);
    std::vector<BitMatrix> patterns;
    for (int i = 0; i < 64; ++i) {
        BitMatrix a(72, 72);
        apply_fixed_weight_errors(a, k, rng);
        patterns.push_back(std::move(a));
    }
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(decode_array(pc, patterns[i++ % patterns.size()], 6));
    }
}
BENCHMARK(BM_DecodeProduct)->Arg(1)->Arg(4)->Arg(26);

}  // namespace

BENCHMARK_MAIN();
