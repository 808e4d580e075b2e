#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "evsat/events.hpp"
#include "evsat/ground_truth.hpp"
#include "evsat/rng.hpp"

namespace evsat {

/// Parameters for the event-frame augmentations. All draws come from a caller
/// owned Rng, so replaying a seed reproduces outputs bit-exactly.
struct AugmentConfig {
    double noise_density = 0.02;                       ///< fraction of pixels hit by noise
    std::array<double, 2> noise_intensity_range{0.5, 1.0};
    std::array<int, 2> line_count_range{1, 4};
    double line_intensity = 0.8;
    double rotation_range_deg = 0.0;                   ///< rotation drawn from +-range
    double translation_range_px = 0.0;                 ///< each axis drawn from +-range
    std::uint64_t seed = 0;
};

/// Replaces round(noise_density * M * N) distinct uniformly chosen pixels with
/// a uniform draw from noise_intensity_range, simulating background-activity
/// events.
EventFrame random_event_noise(const EventFrame& frame, const AugmentConfig& cfg, Rng& rng);

/// Rasterizes k ~ uniform(line_count_range) segments between random border
/// points at line_intensity (brighter-wins), simulating lab background edges.
EventFrame random_event_lines(const EventFrame& frame, const AugmentConfig& cfg, Rng& rng);

/// Bresenham segment at the given intensity, brighter-wins compositing.
void rasterize_segment(Image<float>& image, int x0, int y0, int x1, int y1, float intensity);

/// Deterministic core of the rigid augmentation: rotate by theta_deg about
/// the image center (width/2, height/2), then translate by (dx, dy) pixels.
/// The frame is resampled bilinearly; landmarks and bbox follow the same map,
/// with landmarks leaving the image flagged invisible.
std::pair<EventFrame, GroundTruthRecord> rigid_augment(const EventFrame& frame,
                                                       const GroundTruthRecord& labels,
                                                       double theta_deg, double dx, double dy);

/// rigid_augment with theta ~ uniform(+-rotation_range_deg) and dx, dy ~
/// uniform(+-translation_range_px).
std::pair<EventFrame, GroundTruthRecord> random_rigid_augment(const EventFrame& frame,
                                                              const GroundTruthRecord& labels,
                                                              const AugmentConfig& cfg, Rng& rng);

}  // namespace evsat
