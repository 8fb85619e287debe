#include "netcp/baselines.hpp"
#include "netcp/detect.hpp"
#include "netcp/fit.hpp"
#include "netcp/ghrg.hpp"
#include "netcp/synth.hpp"

#include <benchmark/benchmark.h>

using namespace netcp;

namespace {

/// First w snapshots of a default split sequence.
GraphWindow split_window(std::size_t n, std::size_t w) {
    ChangeSpec spec = ChangeSpec::for_delta(ChangeKind::split, 0.45);
    spec.n = n;
    spec.groups = {n / 2, n - n / 2};
    spec.seed = 3;
    const auto synthetic = generate_sequence(spec);
    return window_ending_at_index(synthetic.sequence, w - 1, w);
}

void BM_CountPairs(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    const auto tree = random_binary_tree(n, rng).to_dendrogram();
    const auto window = split_window(n, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_pairs(tree, window[0]));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CountPairs)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_TreeChainSweep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto window = split_window(n, 4);
    Rng rng(2);
    TreeChain chain(random_binary_tree(n, rng), window, BetaParams{});
    for (auto _ : state) {
        chain.sweep(rng);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TreeChainSweep)->RangeMultiplier(2)->Range(16, 128)->Complexity();

void BM_FitGhrg(benchmark::State& state) {
    const auto window = split_window(30, 4);
    FitConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_ghrg(window, BetaParams{}, cfg));
    }
}
BENCHMARK(BM_FitGhrg)->Unit(benchmark::kMillisecond);

void BM_BootstrapReplicate(benchmark::State& state) {
    const auto window = split_window(30, 4);
    FitConfig cfg;
    cfg.burn_in_sweeps = 50;
    cfg.n_samples = 20;
    const auto model = fit_ghrg(window, BetaParams{}, cfg);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bootstrap_replicate(model, 4, BetaParams{}, ++seed));
    }
}
BENCHMARK(BM_BootstrapReplicate);

void BM_GaussianMaxLambda(benchmark::State& state) {
    const std::vector<double> xs{5.1, 4.8, 5.3, 7.9};
    for (auto _ : state) {
        benchmark::DoNotOptimize(gaussian_max_lambda(xs, default_gaussian_prior(xs)));
    }
}
BENCHMARK(BM_GaussianMaxLambda);

} // namespace

BENCHMARK_MAIN();
