#pragma once

#include <cstdint>
#include <vector>

#include "evsat/ground_truth.hpp"
#include "evsat/rng.hpp"

namespace evsat {

/// One 2D observation of a 3D landmark with a confidence score.
struct Correspondence {
    int landmark_index = 0;
    Eigen::Vector2d uv{0.0, 0.0};
    double confidence = 1.0;
};

/// Noisy-oracle landmark predictor configuration. Stands in for a learned
/// landmark regressor: observations are ground truth perturbed by Gaussian
/// noise, a fraction of them displaced uniformly within outlier_spread, and
/// each scored by a Gaussian kernel of its realized error,
/// exp(-err^2 / (2 sigma_c^2)) with sigma_c = max(pixel_noise_sigma, 1) px.
struct OracleConfig {
    double pixel_noise_sigma = 0.5;
    double outlier_rate = 0.0;
    double outlier_spread_px = 50.0;
    std::uint64_t seed = 0;
};

/// Produces one correspondence per visible landmark; invisible landmarks are
/// omitted and degenerate records give an empty result.
std::vector<Correspondence> predict_landmarks(const GroundTruthRecord& record,
                                              const OracleConfig& cfg, Rng& rng);

}  // namespace evsat
