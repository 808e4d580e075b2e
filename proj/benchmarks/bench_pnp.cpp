#include <benchmark/benchmark.h>

#include "evsat/pnp.hpp"
#include "evsat/rng.hpp"

using namespace evsat;

namespace {

struct Problem {
    LandmarkSet landmarks;
    std::vector<Correspondence> corrs;
    CameraIntrinsics intrinsics{500, 500, 320, 240};
    Pose truth;
};

Problem make_problem(std::size_t n, double sigma) {
    Rng rng(7);
    Problem p;
    for (std::size_t i = 0; i < n; ++i) {
        p.landmarks.points.emplace_back(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                                        rng.uniform(-0.5, 0.5));
    }
    Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
    q.normalize();
    p.truth.rotation = q;
    p.truth.translation = {0.1, -0.05, 3.0};
    const auto uvs = project(p.intrinsics, p.truth, p.landmarks.points);
    for (std::size_t i = 0; i < n; ++i) {
        Correspondence c;
        c.landmark_index = static_cast<int>(i);
        c.uv = uvs[i] + sigma * Eigen::Vector2d{rng.normal(), rng.normal()};
        c.confidence = 0.99;
        p.corrs.push_back(c);
    }
    return p;
}

}  // namespace

static void BM_SolvePnPLinear(benchmark::State& state) {
    const auto p = make_problem(static_cast<std::size_t>(state.range(0)), 0.5);
    for (auto _ : state) {
        auto pose = solve_pnp_linear(p.corrs, p.landmarks, p.intrinsics);
        benchmark::DoNotOptimize(pose.translation.data());
    }
}
BENCHMARK(BM_SolvePnPLinear)->Arg(12)->Arg(24)->Arg(48);

static void BM_EstimatePose(benchmark::State& state) {
    const auto p = make_problem(24, 0.5);
    for (auto _ : state) {
        auto result = estimate_pose(p.corrs, p.landmarks, p.intrinsics);
        benchmark::DoNotOptimize(result.pose.translation.data());
    }
}
BENCHMARK(BM_EstimatePose);

BENCHMARK_MAIN();
