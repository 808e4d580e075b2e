#include <doctest.h>

#include <algorithm>
#include <map>

#include "evsat/errors.hpp"
#include "evsat/events.hpp"
#include "evsat/rng.hpp"

using namespace evsat;

namespace {

EventStream make_stream(std::vector<std::int64_t> times, SensorGeometry geom = {}) {
    EventStream stream;
    stream.geometry = geom;
    for (auto t : times) {
        stream.events.push_back(Event{t, 0, 0, 1});
    }
    return stream;
}

EventStream random_stream(std::size_t n, std::int64_t max_t, Rng& rng, SensorGeometry geom = {}) {
    EventStream stream;
    stream.geometry = geom;
    stream.events.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        stream.events.push_back(Event{rng.uniform_int(0, max_t),
                                      static_cast<std::uint16_t>(rng.uniform_int(0, geom.width - 1)),
                                      static_cast<std::uint16_t>(rng.uniform_int(0, geom.height - 1)),
                                      rng.uniform() < 0.5 ? std::int8_t{1} : std::int8_t{-1}});
    }
    std::sort(stream.events.begin(), stream.events.end(),
              [](const Event& a, const Event& b) { return a.t < b.t; });
    return stream;
}

}  // namespace

TEST_CASE("batch_events: empty stream gives no batches") {
    const auto batches = batch_events(make_stream({}), 50000);
    CHECK(batches.empty());
}

TEST_CASE("batch_events: events at 0/10/60 ms with tau 50 ms") {
    const auto stream = make_stream({0, 10000, 60000});
    const auto batches = batch_events(stream, 50000);
    REQUIRE(batches.size() == 2);
    CHECK(batches[0].size() == 2);
    CHECK(batches[0].window_start == 0);
    CHECK(batches[0].window_duration == 50000);
    CHECK_FALSE(batches[0].partial);
    CHECK(batches[1].size() == 1);
    CHECK(batches[1].window_start == 50000);
    CHECK(batches[1].events[0].t == 60000);
    CHECK(batches[1].partial);
    CHECK(batches[1].window_duration == 10001);
}

TEST_CASE("batch_events: 2.40 s stream with 1.7 M events gives 48 batches") {
    Rng rng(7);
    auto stream = random_stream(1'700'000, 2'399'999, rng);
    const auto batches = batch_events(stream, 50000);
    CHECK(batches.size() == 48);
    std::size_t total = 0;
    for (const auto& b : batches) {
        total += b.size();
    }
    CHECK(total == stream.events.size());
}

TEST_CASE("batch_events: windows anchor at the first event") {
    // 223455 still falls in window 0 = [123456, 223456); 223456 starts window 1
    const auto stream = make_stream({123456, 223455, 223456});
    const auto batches = batch_events(stream, 100000);
    REQUIRE(batches.size() == 2);
    CHECK(batches[0].window_start == 123456);
    CHECK(batches[1].window_start == 223456);
    CHECK(batches[0].size() == 2);
    CHECK(batches[1].size() == 1);
}

TEST_CASE("batch_events: gap in the stream yields empty middle batches") {
    const auto stream = make_stream({0, 10000, 160000});
    const auto batches = batch_events(stream, 50000);
    REQUIRE(batches.size() == 4);
    CHECK(batches[0].size() == 2);
    CHECK(batches[1].empty());
    CHECK(batches[2].empty());
    CHECK(batches[3].size() == 1);
}

TEST_CASE("batch_events: stream spanning an exact window multiple is not partial") {
    const auto stream = make_stream({0, 49999});
    const auto batches = batch_events(stream, 50000);
    REQUIRE(batches.size() == 1);
    CHECK_FALSE(batches[0].partial);
    CHECK(batches[0].window_duration == 50000);
}

TEST_CASE("batch_events: errors") {
    CHECK_THROWS_AS(batch_events(make_stream({0, 10}), 0), ParameterError);
    CHECK_THROWS_AS(batch_events(make_stream({0, 10}), -5), ParameterError);
    auto unsorted = make_stream({10, 0});
    CHECK_THROWS_AS(batch_events(unsorted, 50), ValidationError);
    auto anchored = make_stream({100, 200});
    CHECK_THROWS_AS(batch_events(anchored, 50, 150), ParameterError);
}

TEST_CASE("batch_events property: count conservation over random streams") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(0, 5000));
        auto stream = random_stream(n, rng.uniform_int(1, 2'000'000), rng);
        const auto tau = rng.uniform_int(1, 300'000);
        const auto batches = batch_events(stream, tau);
        std::size_t total = 0;
        for (const auto& b : batches) {
            total += b.size();
            for (const auto& e : b.events) {
                CHECK(e.t >= b.window_start);
                CHECK(e.t < b.window_start + b.window_duration);
            }
        }
        CHECK(total == n);
    }
}

TEST_CASE("batch_events property: streaming equivalence with a shared anchor") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        auto stream = random_stream(2000, 500'000, rng);
        const std::int64_t tau = rng.uniform_int(1000, 100'000);
        const auto whole = batch_events(stream, tau);

        const auto split = static_cast<std::size_t>(rng.uniform_int(1, 1999));
        EventStream chunk1{std::vector<Event>(stream.events.begin(),
                                              stream.events.begin() + static_cast<long>(split)),
                           stream.geometry};
        EventStream chunk2{std::vector<Event>(stream.events.begin() + static_cast<long>(split),
                                              stream.events.end()),
                           stream.geometry};
        const std::int64_t anchor = stream.events.front().t;

        // merge per-window event counts from both chunks
        std::map<std::int64_t, std::size_t> merged;
        for (const auto& chunk : {chunk1, chunk2}) {
            if (chunk.events.empty()) {
                continue;
            }
            for (const auto& b : batch_events(chunk, tau, anchor)) {
                merged[b.window_start] += b.size();
            }
        }
        std::map<std::int64_t, std::size_t> reference;
        for (const auto& b : whole) {
            if (!b.empty()) {
                reference[b.window_start] += b.size();
            }
        }
        // drop empty windows the chunked run may not have produced
        for (auto it = merged.begin(); it != merged.end();) {
            it = it->second == 0 ? merged.erase(it) : std::next(it);
        }
        CHECK(merged == reference);
    }
}

TEST_CASE("events_to_frame: hand histogram on a 2x2 sensor") {
    std::vector<Event> events{{0, 0, 0, 1}, {1, 0, 0, -1}, {2, 1, 1, 1}};
    EventBatch batch{std::span<const Event>(events), 0, 10, false};
    const auto frame = events_to_frame(batch, SensorGeometry{2, 2});
    CHECK(frame.pixels.at(0, 0) == 1.0f);
    CHECK(frame.pixels.at(0, 1) == 0.0f);
    CHECK(frame.pixels.at(1, 0) == 0.0f);
    CHECK(frame.pixels.at(1, 1) == 0.5f);
    CHECK(frame.timestamp == 5);
}

TEST_CASE("events_to_frame: empty batch gives an all-zero frame") {
    EventBatch batch{{}, 100, 50, false};
    const auto frame = events_to_frame(batch, SensorGeometry{2, 2});
    for (float v : frame.pixels.data) {
        CHECK(v == 0.0f);
    }
    CHECK(frame.timestamp == 125);
}

TEST_CASE("events_to_frame: conservation oracle on 10k random events") {
    Rng rng(17);
    const SensorGeometry geom;
    auto stream = random_stream(10000, 1'000'000, rng, geom);
    EventBatch batch{std::span<const Event>(stream.events), 0, 1'000'001, false};
    const auto frame = events_to_frame(batch, geom);

    // independent recount
    std::vector<std::uint32_t> counts(geom.pixel_count(), 0);
    for (const auto& e : stream.events) {
        ++counts[static_cast<std::size_t>(e.y) * geom.width + e.x];
    }
    std::uint64_t total = 0;
    std::uint32_t max_count = 0;
    for (auto c : counts) {
        total += c;
        max_count = std::max(max_count, c);
    }
    CHECK(total == 10000);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        CHECK(frame.pixels.data[i] ==
              static_cast<float>(counts[i]) / static_cast<float>(max_count));
    }
}

TEST_CASE("events_to_frame property: non-empty frames peak at exactly 1") {
    Rng rng(19);
    const SensorGeometry geom{32, 24};
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, 400));
        auto stream = random_stream(n, 1000, rng, geom);
        EventBatch batch{std::span<const Event>(stream.events), 0, 1001, false};
        const auto frame = events_to_frame(batch, geom);
        float max_v = 0.0f;
        for (float v : frame.pixels.data) {
            CHECK(v >= 0.0f);
            CHECK(v <= 1.0f);
            max_v = std::max(max_v, v);
        }
        CHECK(max_v == 1.0f);
    }
}

TEST_CASE("events_to_frame: out-of-bounds event names its index") {
    std::vector<Event> events{{0, 0, 0, 1}, {1, 5, 1, 1}};
    EventBatch batch{std::span<const Event>(events), 0, 10, false};
    CHECK_THROWS_WITH_AS(events_to_frame(batch, SensorGeometry{2, 2}),
                         doctest::Contains("event 1"), ValidationError);
}
