#include <doctest.h>

#include <cmath>

#include "evsat/errors.hpp"
#include "evsat/event_synthesis.hpp"
#include "evsat/trajectory.hpp"

using namespace evsat;

namespace {

IntensityFrame uniform_frame(std::int64_t t, int w, int h, float value) {
    IntensityFrame frame;
    frame.t = t;
    frame.pixels = Image<float>(w, h, value);
    return frame;
}

std::vector<IntensityFrame> rendered_sequence(int n_frames) {
    const auto model = make_reference_satellite();
    TrajectorySpec spec;
    spec.kind = TrajectoryKind::orbit;
    spec.speed_mps = 0.3007;
    spec.duration_s = n_frames / 100.0;
    spec.orbit_radius_m = 1.0;
    const auto poses = generate_trajectory(spec);
    std::vector<IntensityFrame> frames;
    const CameraIntrinsics k{600, 600, 320, 240};
    for (const auto& tp : poses) {
        auto frame = render_wireframe(model, tp.pose, k, {});
        frame.t = tp.t;
        frames.push_back(std::move(frame));
    }
    return frames;
}

}  // namespace

TEST_CASE("frames_to_events: constant intensity emits nothing") {
    std::vector<IntensityFrame> frames;
    for (int i = 0; i < 5; ++i) {
        frames.push_back(uniform_frame(i * 10000, 8, 8, 123.0f));
    }
    const auto stream = frames_to_events(frames, 0.2, SensorGeometry{8, 8});
    CHECK(stream.events.empty());
}

TEST_CASE("frames_to_events: the 100 to 200 step with C=0.2 fires exactly 3 positive events") {
    // dL = ln(201/101) = 0.6881..., floor(dL / 0.2) = 3
    std::vector<IntensityFrame> frames{uniform_frame(0, 1, 1, 100.0f),
                                       uniform_frame(10000, 1, 1, 200.0f)};
    const auto stream = frames_to_events(frames, 0.2, SensorGeometry{1, 1});
    REQUIRE(stream.events.size() == 3);
    for (const auto& e : stream.events) {
        CHECK(e.p == 1);
        CHECK(e.t >= 0);
        CHECK(e.t <= 10000);
        CHECK(e.t % 10000 == 0);
    }
}

TEST_CASE("frames_to_events: symmetric up-down step balances polarities") {
    std::vector<IntensityFrame> frames{uniform_frame(0, 2, 2, 100.0f),
                                       uniform_frame(10000, 2, 2, 200.0f),
                                       uniform_frame(20000, 2, 2, 100.0f)};
    const auto stream = frames_to_events(frames, 0.2, SensorGeometry{2, 2});
    std::size_t pos = 0, neg = 0;
    for (const auto& e : stream.events) {
        (e.p == 1 ? pos : neg) += 1;
    }
    CHECK(pos == neg);
    CHECK(pos == 3 * 4);  // 3 events per pixel per direction
}

TEST_CASE("frames_to_events: sub-threshold changes accumulate against the reference") {
    // each step is below C, the total is not
    std::vector<IntensityFrame> frames;
    const float levels[] = {100.0f, 105.0f, 110.0f, 116.0f, 122.0f, 129.0f};
    for (int i = 0; i < 6; ++i) {
        frames.push_back(uniform_frame(i * 10000, 1, 1, levels[i]));
    }
    const auto stream = frames_to_events(frames, 0.2, SensorGeometry{1, 1});
    // total dL = ln(130/101) = 0.2524 -> exactly one event once accumulated
    CHECK(stream.events.size() == 1);
    CHECK(stream.events[0].p == 1);
}

TEST_CASE("frames_to_events: timestamps are resolution-quantized and in-interval") {
    std::vector<IntensityFrame> frames{uniform_frame(0, 1, 1, 10.0f),
                                       uniform_frame(10000, 1, 1, 200.0f)};
    const auto stream = frames_to_events(frames, 0.2, SensorGeometry{1, 1}, 1000);
    REQUIRE(!stream.events.empty());
    CHECK(stream.is_sorted());
    std::int64_t prev = -1;
    for (const auto& e : stream.events) {
        CHECK(e.t % 1000 == 0);
        CHECK(e.t >= 0);
        CHECK(e.t <= 10000);
        CHECK(e.t >= prev);
        prev = e.t;
    }
    // ln(201/11) = 2.905 -> 14 events at C = 0.2, spread across the interval
    CHECK(stream.events.size() == 14);
    CHECK(stream.events.front().t < stream.events.back().t);
}

TEST_CASE("frames_to_events: input validation") {
    std::vector<IntensityFrame> one{uniform_frame(0, 2, 2, 10.0f)};
    CHECK_THROWS_AS(frames_to_events(one, 0.2, SensorGeometry{2, 2}), ParameterError);

    std::vector<IntensityFrame> uneven{uniform_frame(0, 2, 2, 10.0f),
                                       uniform_frame(10000, 2, 2, 10.0f),
                                       uniform_frame(25000, 2, 2, 10.0f)};
    CHECK_THROWS_AS(frames_to_events(uneven, 0.2, SensorGeometry{2, 2}), ValidationError);

    std::vector<IntensityFrame> two{uniform_frame(0, 2, 2, 10.0f),
                                    uniform_frame(10000, 2, 2, 10.0f)};
    CHECK_THROWS_AS(frames_to_events(two, 0.0, SensorGeometry{2, 2}), ParameterError);
}

TEST_CASE("frames_to_events: event counts shrink as the threshold doubles") {
    const auto frames = rendered_sequence(40);
    std::size_t previous = std::numeric_limits<std::size_t>::max();
    for (const double c : {0.1, 0.2, 0.4}) {
        const auto stream = frames_to_events(frames, c, SensorGeometry{});
        CHECK(stream.events.size() <= previous);
        CHECK(!stream.events.empty());
        previous = stream.events.size();
    }
}

TEST_CASE("frames_to_events: rendered sequence events stay within the sensor") {
    const auto frames = rendered_sequence(10);
    const auto stream = frames_to_events(frames, 0.2, SensorGeometry{});
    CHECK(stream.is_sorted());
    for (const auto& e : stream.events) {
        CHECK(e.x < 640);
        CHECK(e.y < 480);
    }
}
