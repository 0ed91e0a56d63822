// Direct-evaluation serial reference kernels vs the recurrence/OpenMP ones.
// Thread count comes from OMP_NUM_THREADS.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <numbers>
#include <vector>

#include "qfractal/profiles.hpp"
#include "qfractal/trajectory.hpp"
#include "qfractal/well.hpp"

using namespace qfractal;

namespace {

const SpectralState& state(int n) {
    static const WellConfig well;
    static std::vector<std::pair<int, SpectralState>> cache;
    for (const auto& [k, s] : cache) {
        if (k == n) return s;
    }
    cache.emplace_back(n, square_coefficients(symmetric_two_square(), well, static_cast<std::size_t>(n)));
    return cache.back().second;
}

void tag(benchmark::State& s) { s.counters["threads"] = omp_get_max_threads(); }

void BM_space_reference(benchmark::State& s) {
    const auto& st = state(static_cast<int>(s.range(0)));
    const double t = revival_time(st) / std::numbers::sqrt2;
    for (auto _ : s) benchmark::DoNotOptimize(reference::space_profile(st, t, 12));
}

void BM_space_parallel(benchmark::State& s) {
    const auto& st = state(static_cast<int>(s.range(0)));
    const double t = revival_time(st) / std::numbers::sqrt2;
    for (auto _ : s) benchmark::DoNotOptimize(space_profile(st, t, 12));
    tag(s);
}

void BM_time_reference(benchmark::State& s) {
    const auto& st = state(static_cast<int>(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(reference::time_profile(st, -0.25, 12));
}

void BM_time_parallel(benchmark::State& s) {
    const auto& st = state(static_cast<int>(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(time_profile(st, -0.25, 12));
    tag(s);
}

void BM_carpet_reference(benchmark::State& s) {
    const auto& st = state(static_cast<int>(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(reference::carpet(st, 256, 128));
}

void BM_carpet_parallel(benchmark::State& s) {
    const auto& st = state(static_cast<int>(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(carpet(st, 256, 128));
    tag(s);
}

std::vector<double> starts() {
    std::vector<double> x0s;
    for (int i = 0; i < 8; ++i) x0s.push_back(-0.36 + 0.03 * i);
    return x0s;
}

void BM_trajectories_serial(benchmark::State& s) {
    const auto& st = state(static_cast<int>(s.range(0)));
    const double T = revival_time(st);
    const auto x0s = starts();
    for (auto _ : s) {
        for (double x0 : x0s) benchmark::DoNotOptimize(integrate_trajectory(st, x0, T, 9));
    }
}

void BM_trajectories_parallel(benchmark::State& s) {
    const auto& st = state(static_cast<int>(s.range(0)));
    const double T = revival_time(st);
    const auto x0s = starts();
    for (auto _ : s) benchmark::DoNotOptimize(integrate_trajectories(st, x0s, T, 9));
    tag(s);
}

}  // namespace

BENCHMARK(BM_space_reference)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_space_parallel)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_time_reference)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_time_parallel)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_carpet_reference)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_carpet_parallel)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_trajectories_serial)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_trajectories_parallel)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
