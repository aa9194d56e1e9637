#include <benchmark/benchmark.h>

#include "scmra/channel.hpp"
#include "scmra/protocol.hpp"
#include "scmra/sim_config.hpp"
#include "scmra/traffic.hpp"

using namespace scmra;

namespace {

SimConfig profile(bool reduced) { return reduced ? reduced_profile(SimConfig{}) : SimConfig{}; }

}  // namespace

static void BM_LosChannel(benchmark::State& state) {
    const auto cfg = profile(state.range(0));
    const auto bs = cfg.bs_geometry();
    const auto ue = cfg.scm_geometry(Point3(1.0, -2.0, 10.0));
    for (auto _ : state) benchmark::DoNotOptimize(los_channel(bs, ue, cfg.wavelength()));
}
BENCHMARK(BM_LosChannel)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

static void BM_Factorize(benchmark::State& state) {
    const auto cfg = profile(state.range(0));
    const auto h = los_channel(cfg.bs_geometry(), cfg.scm_geometry(Point3(1.0, -2.0, 10.0)), cfg.wavelength());
    for (auto _ : state) benchmark::DoNotOptimize(factorize(h, 1e-7));
}
BENCHMARK(BM_Factorize)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

static void BM_ScoutingUpdate(benchmark::State& state) {
    const auto n = state.range(0);
    const auto filled = state.range(1);
    RandomStream rng(1);
    SharedDatabase db(n);
    for (int i = 0; i < filled; ++i) db.add(random_unit_vector(rng, n, db.vectors()), i);
    ScoutingState s;
    s.x0 = random_unit_vector(rng, n, db.vectors());
    const ComplexVector y = rng.complex_normal_vector(n);
    for (auto _ : state) benchmark::DoNotOptimize(scouting_update(s, y, db, 1.0));
}
BENCHMARK(BM_ScoutingUpdate)->Args({256, 0})->Args({900, 0})->Args({900, 8})->Args({900, 64});

// One symbol with `range(1)` UEs active on the reference LOS geometry.
static void BM_SymbolStep(benchmark::State& state) {
    const auto cfg = profile(state.range(0));
    World world(cfg, 1);
    RandomStream placement(2), payload(3);
    const int ues = static_cast<int>(state.range(1));
    for (int u = 0; u < ues; ++u) world.schedule(make_packet(cfg, u, 0, placement, payload));
    world.step();
    std::int64_t steps = 1;
    for (auto _ : state) {
        if (steps++ % 140 == 0) {
            state.PauseTiming();
            world = World(cfg, static_cast<std::uint64_t>(steps));
            for (int u = 0; u < ues; ++u) world.schedule(make_packet(cfg, u, 0, placement, payload));
            world.step();
            state.ResumeTiming();
        }
        world.step();
    }
}
BENCHMARK(BM_SymbolStep)->Args({1, 0})->Args({1, 2})->Args({0, 0})->Args({0, 2})->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
