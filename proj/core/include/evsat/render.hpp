#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "evsat/events.hpp"
#include "evsat/geometry.hpp"
#include "evsat/image.hpp"

namespace evsat {

/// Edge model of the target object. Landmark indices select the Z salient
/// vertices used for pose estimation.
struct WireframeModel {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> landmark_indices;

    LandmarkSet landmarks() const;
};

/// Linear-intensity frame, values in [0, 255].
struct IntensityFrame {
    std::int64_t t = 0;  ///< microseconds
    Image<float> pixels;
};

constexpr float kRenderBackground = 10.0f;
constexpr float kRenderLine = 200.0f;

/// Rasterizes the model's edges as anti-aliased bright lines (intensity 200)
/// on a dark background (intensity 10). Edge segments crossing the camera
/// plane are clipped at z = 1e-6 m; off-screen geometry is silently dropped.
/// Deterministic: identical inputs give bit-identical frames.
IntensityFrame render_wireframe(const WireframeModel& model, const Pose& pose,
                                const CameraIntrinsics& intrinsics,
                                const SensorGeometry& geometry);

/// Built-in satellite model: box body, two solar panels and a dish, about
/// 0.8 m across, with 24 landmark vertices spread over its surface.
WireframeModel make_reference_satellite();

}  // namespace evsat
