#include <benchmark/benchmark.h>

#include "eqlab/dynamics.hpp"
#include "eqlab/equipartition.hpp"
#include "eqlab/microcanonical.hpp"

using namespace eqlab;

namespace {

void BM_LeapfrogOrbit(benchmark::State& state) {
    const auto pend = make_model("pendulum");
    const double period = orbit_period(*pend, 0.0, Component::oscillation);
    const PhaseState x0 = pend->initial_state_on_shell(0.0, Component::oscillation);
    const auto steps = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_orbit(*pend, x0, period, period / steps).max_energy_drift);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LeapfrogOrbit)->Arg(1000)->Arg(4000);

void BM_TimeAverage(benchmark::State& state) {
    const auto pend = make_model("pendulum");
    const double period = orbit_period(*pend, 5.0, Component::oscillation);
    const StateFunction f = along_function(field_from_token(*pend, "f11"), *pend);
    const PhaseState x0 = pend->initial_state_on_shell(5.0, Component::oscillation);
    for (auto _ : state) {
        benchmark::DoNotOptimize(time_average(*pend, f, x0, 64.0 * period, period / 4000.0).value);
    }
}
BENCHMARK(BM_TimeAverage)->Unit(benchmark::kMillisecond);

void BM_MonteCarloVolume(benchmark::State& state) {
    const auto pend = make_model("pendulum");
    McConfig cfg;
    cfg.n_samples = static_cast<std::uint64_t>(state.range(0));
    cfg.workers = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(vol_me_mc(*pend, 5.0, cfg).value);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarloVolume)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_QuadraturePeriod(benchmark::State& state) {
    const auto pend = make_model("pendulum");
    for (auto _ : state) {
        benchmark::DoNotOptimize(orbit_period(*pend, 7.0, Component::oscillation));
        benchmark::DoNotOptimize(orbit_period(*pend, 20.0, Component::rotation_pos));
    }
}
BENCHMARK(BM_QuadraturePeriod);

void BM_QuadratureKT(benchmark::State& state) {
    const auto pend = make_model("pendulum");
    const McConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(temperature_kT(*pend, 7.0, cfg).value);
    }
}
BENCHMARK(BM_QuadratureKT);

} // namespace

BENCHMARK_MAIN();
