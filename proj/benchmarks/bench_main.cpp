#include <benchmark/benchmark.h>

#include "orthomap/editor.hpp"
#include "orthomap/synthetic.hpp"
#include "orthomap/trainer.hpp"

using namespace orthomap;

namespace {

SyntheticData make(benchmark::State& state) {
    SyntheticSpec spec;
    spec.d = state.range(0);
    spec.a = state.range(1);
    spec.n = 2000;
    spec.rho = 0.7;
    return synth_ground_truth(spec);
}

void BM_Gradient(benchmark::State& state) {
    const auto data = make(state);
    for (auto _ : state) benchmark::DoNotOptimize(gradient(data.truth, data.dataset, 2.0));
}
BENCHMARK(BM_Gradient)->Args({64, 10})->Args({512, 40});

void BM_ClosedForm(benchmark::State& state) {
    const auto data = make(state);
    for (auto _ : state) benchmark::DoNotOptimize(fit_closed_form(data.dataset));
}
BENCHMARK(BM_ClosedForm)->Args({64, 10})->Args({512, 40});

void BM_CosineMatrix(benchmark::State& state) {
    const auto data = make(state);
    for (auto _ : state) benchmark::DoNotOptimize(cosine_matrix(data.truth));
}
BENCHMARK(BM_CosineMatrix)->Args({64, 10})->Args({512, 40});

void BM_Fit200Steps(benchmark::State& state) {
    const auto data = make(state);
    TrainConfig cfg;
    cfg.max_iters = 200;
    cfg.tol = 1e-300;
    for (auto _ : state) benchmark::DoNotOptimize(fit(data.dataset, cfg));
}
BENCHMARK(BM_Fit200Steps)->Args({64, 10})->Args({512, 40})->Unit(benchmark::kMillisecond);

void BM_EditBatch(benchmark::State& state) {
    const auto data = make(state);
    for (auto _ : state) benchmark::DoNotOptimize(edit_batch(data.truth, data.dataset.latents, data.truth.schema[0], 1.0));
}
BENCHMARK(BM_EditBatch)->Args({64, 10})->Args({512, 40});

}  // namespace
BENCHMARK_MAIN();
