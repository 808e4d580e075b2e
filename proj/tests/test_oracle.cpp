#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "evsat/oracle.hpp"

using namespace evsat;

namespace {

GroundTruthRecord visible_record(std::size_t n) {
    GroundTruthRecord rec;
    for (std::size_t i = 0; i < n; ++i) {
        rec.landmarks2d.push_back({{100.0 + 15.0 * static_cast<double>(i), 200.0}, true});
    }
    return rec;
}

}  // namespace

TEST_CASE("predict_landmarks: noiseless oracle returns ground truth at confidence 1") {
    Rng rng(1);
    OracleConfig cfg;
    cfg.pixel_noise_sigma = 0.0;
    cfg.outlier_rate = 0.0;
    const auto rec = visible_record(24);
    const auto corrs = predict_landmarks(rec, cfg, rng);
    REQUIRE(corrs.size() == 24);
    for (std::size_t i = 0; i < corrs.size(); ++i) {
        CHECK(corrs[i].landmark_index == static_cast<int>(i));
        CHECK((corrs[i].uv - rec.landmarks2d[i].uv).norm() == 0.0);
        CHECK(corrs[i].confidence == 1.0);
    }
}

TEST_CASE("predict_landmarks: mean radial error matches the Rayleigh mean") {
    Rng rng(2);
    OracleConfig cfg;
    cfg.pixel_noise_sigma = 2.0;
    const auto rec = visible_record(1);
    double sum = 0.0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        const auto corrs = predict_landmarks(rec, cfg, rng);
        sum += (corrs[0].uv - rec.landmarks2d[0].uv).norm();
    }
    const double mean = sum / trials;
    CHECK(mean == doctest::Approx(2.0 * std::sqrt(M_PI / 2.0)).epsilon(0.02));
}

TEST_CASE("predict_landmarks: forced outliers score below exp(-1/2)") {
    Rng rng(3);
    OracleConfig cfg;
    cfg.pixel_noise_sigma = 0.5;
    cfg.outlier_rate = 1.0;
    cfg.outlier_spread_px = 200.0;
    const auto rec = visible_record(24);
    for (int repeat = 0; repeat < 20; ++repeat) {
        for (const auto& corr : predict_landmarks(rec, cfg, rng)) {
            CHECK(corr.confidence < std::exp(-0.5));
        }
    }
}

TEST_CASE("predict_landmarks: confidence decreases with realized error") {
    Rng rng(4);
    OracleConfig cfg;
    cfg.pixel_noise_sigma = 1.5;
    cfg.outlier_rate = 0.3;
    cfg.outlier_spread_px = 40.0;
    const auto rec = visible_record(24);
    std::vector<std::pair<double, double>> err_conf;
    for (int repeat = 0; repeat < 50; ++repeat) {
        for (const auto& corr : predict_landmarks(rec, cfg, rng)) {
            const double err =
                (corr.uv - rec.landmarks2d[static_cast<std::size_t>(corr.landmark_index)].uv).norm();
            err_conf.emplace_back(err, corr.confidence);
        }
    }
    std::sort(err_conf.begin(), err_conf.end());
    for (std::size_t i = 1; i < err_conf.size(); ++i) {
        CHECK(err_conf[i].second <= err_conf[i - 1].second + 1e-12);
    }
}

TEST_CASE("predict_landmarks: output count tracks visibility; degenerate gives nothing") {
    Rng rng(5);
    OracleConfig cfg;
    auto rec = visible_record(24);
    rec.landmarks2d[3].visible = false;
    rec.landmarks2d[17].visible = false;
    auto corrs = predict_landmarks(rec, cfg, rng);
    CHECK(corrs.size() == 22);
    for (const auto& c : corrs) {
        CHECK(c.landmark_index != 3);
        CHECK(c.landmark_index != 17);
    }

    rec.degenerate = true;
    CHECK(predict_landmarks(rec, cfg, rng).empty());
}

TEST_CASE("predict_landmarks: deterministic under a fixed seed") {
    OracleConfig cfg;
    cfg.pixel_noise_sigma = 1.0;
    cfg.outlier_rate = 0.2;
    const auto rec = visible_record(24);
    Rng rng_a(99), rng_b(99);
    const auto a = predict_landmarks(rec, cfg, rng_a);
    const auto b = predict_landmarks(rec, cfg, rng_b);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].uv == b[i].uv);
        CHECK(a[i].confidence == b[i].confidence);
    }
}
