#include "evsat/oracle.hpp"

#include <cmath>
#include <numbers>

#include "evsat/errors.hpp"

namespace evsat {

std::vector<Correspondence> predict_landmarks(const GroundTruthRecord& record,
                                              const OracleConfig& cfg, Rng& rng) {
    if (cfg.pixel_noise_sigma < 0.0) {
        throw ParameterError("predict_landmarks: pixel_noise_sigma must be non-negative");
    }
    if (cfg.outlier_rate < 0.0 || cfg.outlier_rate > 1.0) {
        throw ParameterError("predict_landmarks: outlier_rate must lie in [0, 1]");
    }
    std::vector<Correspondence> out;
    if (record.degenerate) {
        return out;
    }
    const double sigma_c = std::max(cfg.pixel_noise_sigma, 1.0);
    out.reserve(record.landmarks2d.size());
    for (std::size_t i = 0; i < record.landmarks2d.size(); ++i) {
        const auto& lm = record.landmarks2d[i];
        if (!lm.visible) {
            continue;
        }
        Eigen::Vector2d offset;
        if (cfg.outlier_rate > 0.0 && rng.uniform() < cfg.outlier_rate) {
            // uniform draw from a disk of radius outlier_spread
            const double r = cfg.outlier_spread_px * std::sqrt(rng.uniform());
            const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
            offset = {r * std::cos(a), r * std::sin(a)};
        } else {
            offset = {cfg.pixel_noise_sigma * rng.normal(), cfg.pixel_noise_sigma * rng.normal()};
        }
        Correspondence corr;
        corr.landmark_index = static_cast<int>(i);
        corr.uv = lm.uv + offset;
        const double err2 = offset.squaredNorm();
        corr.confidence = std::exp(-err2 / (2.0 * sigma_c * sigma_c));
        out.push_back(corr);
    }
    return out;
}

}  // namespace evsat
