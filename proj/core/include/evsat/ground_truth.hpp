#pragma once

#include <cstdint>
#include <vector>

#include "evsat/events.hpp"
#include "evsat/geometry.hpp"
#include "evsat/render.hpp"
#include "evsat/trajectory.hpp"

namespace evsat {

/// 2D landmark observation with a visibility flag.
struct LandmarkProjection {
    Eigen::Vector2d uv{0.0, 0.0};
    bool visible = false;
};

/// Per-frame ground truth: pose, projected landmarks and the 10%-clearance
/// bounding box of the visible ones. Records with fewer than four visible
/// landmarks are kept but flagged degenerate (unusable for PnP).
struct GroundTruthRecord {
    std::int64_t t = 0;
    Pose pose;
    std::vector<LandmarkProjection> landmarks2d;
    BoundingBox bbox;
    bool degenerate = false;

    std::size_t visible_count() const;
    std::vector<Eigen::Vector2d> visible_points() const;
};

/// Projects the model's landmarks for every pose. Landmarks behind the camera
/// or outside the sensor bounds are flagged invisible.
std::vector<GroundTruthRecord> make_ground_truth(const WireframeModel& model,
                                                 const std::vector<TimedPose>& poses,
                                                 const CameraIntrinsics& intrinsics,
                                                 const SensorGeometry& geometry,
                                                 double bbox_clearance = 0.10);

/// Pairs each event frame with the record closest in time (ties go to the
/// earlier record). Empty record list is a parameter error.
std::vector<std::pair<const EventFrame*, const GroundTruthRecord*>> assign_labels_to_frames(
    const std::vector<EventFrame>& frames, const std::vector<GroundTruthRecord>& records);

/// Index of the element of sorted `times` nearest to t, ties to the earlier.
std::size_t nearest_time_index(const std::vector<std::int64_t>& times, std::int64_t t);

}  // namespace evsat
