#include <benchmark/benchmark.h>

#include <vector>

#include "evsat/events.hpp"
#include "evsat/rng.hpp"

using namespace evsat;

namespace {

std::vector<Event> uniform_events(std::size_t n, const SensorGeometry& geom, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Event> events(n);
    for (std::size_t i = 0; i < n; ++i) {
        events[i].t = static_cast<std::int64_t>(i);
        events[i].x = static_cast<std::uint16_t>(rng.uniform_int(0, geom.width - 1));
        events[i].y = static_cast<std::uint16_t>(rng.uniform_int(0, geom.height - 1));
        events[i].p = 1;
    }
    return events;
}

}  // namespace

static void BM_EventsToFrame(benchmark::State& state) {
    const SensorGeometry geom;
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto events = uniform_events(n, geom, 1);
    EventBatch batch{std::span<const Event>(events), 0, 200000, false};
    for (auto _ : state) {
        auto frame = events_to_frame(batch, geom);
        benchmark::DoNotOptimize(frame.pixels.data.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_EventsToFrame)->RangeMultiplier(4)->Range(10'000, 2'560'000);

static void BM_BatchEvents(benchmark::State& state) {
    const SensorGeometry geom;
    const auto n = static_cast<std::size_t>(state.range(0));
    EventStream stream;
    stream.geometry = geom;
    stream.events = uniform_events(n, geom, 2);
    std::int64_t t = 0;
    Rng rng(3);
    for (auto& e : stream.events) {
        t += rng.uniform_int(0, 4);
        e.t = t;
    }
    for (auto _ : state) {
        auto batches = batch_events(stream, 10000);
        benchmark::DoNotOptimize(batches.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_BatchEvents)->Arg(1'000'000);

BENCHMARK_MAIN();
