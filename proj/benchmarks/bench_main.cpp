#include <benchmark/benchmark.h>

#include <vector>

#include "levcool/equilibrium.hpp"
#include "levcool/linear_model.hpp"
#include "levcool/params.hpp"
#include "levcool/scan.hpp"
#include "levcool/spectra.hpp"

using namespace levcool;

namespace {

LinearModel reference_config_model(ModelMode mode) {
    const DerivedParams d = derive_params(reference_config());
    ModelOptions o;
    o.mode = mode;
    return build_model(d, coupling_table(d, d.xi), o);
}

void BM_DeriveParams(benchmark::State& state) {
    const ExperimentConfig c = reference_config();
    for (auto _ : state) benchmark::DoNotOptimize(derive_params(c));
}
BENCHMARK(BM_DeriveParams);

void BM_TransferPsd(benchmark::State& state) {
    const LinearModel m = reference_config_model(state.range(0) ? ModelMode::three_d : ModelMode::two_d);
    std::vector<double> w(static_cast<std::size_t>(state.range(1)));
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 2.0 * m.omega_x * static_cast<double>(i) / w.size();
    for (auto _ : state) benchmark::DoNotOptimize(transfer_psd(m, w));
    state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_TransferPsd)->Args({0, 1000})->Args({0, 10000})->Args({1, 10000});

void BM_ComputeSpectra(benchmark::State& state) {
    const LinearModel m = reference_config_model(ModelMode::two_d);
    for (auto _ : state) benchmark::DoNotOptimize(compute_spectra(m));
}
BENCHMARK(BM_ComputeSpectra)->Unit(benchmark::kMillisecond);

void BM_ScanCell(benchmark::State& state) {
    ScanSpec s;
    s.base = reference_config();
    s.axis1 = parse_axis("radius:5e-8:1.2e-7:2");
    s.axis2 = parse_axis("tweezer_power:0.1:1.0:2");
    for (auto _ : state) benchmark::DoNotOptimize(scan_cell(s, 80e-9, 0.7));
}
BENCHMARK(BM_ScanCell)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
