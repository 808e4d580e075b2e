#include "evsat/ground_truth.hpp"

#include <algorithm>

#include "evsat/errors.hpp"

namespace evsat {

std::size_t GroundTruthRecord::visible_count() const {
    return static_cast<std::size_t>(std::count_if(landmarks2d.begin(), landmarks2d.end(),
                                                  [](const auto& lm) { return lm.visible; }));
}

std::vector<Eigen::Vector2d> GroundTruthRecord::visible_points() const {
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(landmarks2d.size());
    for (const auto& lm : landmarks2d) {
        if (lm.visible) {
            pts.push_back(lm.uv);
        }
    }
    return pts;
}

std::vector<GroundTruthRecord> make_ground_truth(const WireframeModel& model,
                                                 const std::vector<TimedPose>& poses,
                                                 const CameraIntrinsics& intrinsics,
                                                 const SensorGeometry& geometry,
                                                 double bbox_clearance) {
    if (model.landmark_indices.empty() || poses.empty()) {
        throw ParameterError("make_ground_truth: model landmarks and poses must be non-empty");
    }
    const LandmarkSet landmarks = model.landmarks();
    std::vector<GroundTruthRecord> records;
    records.reserve(poses.size());

    for (const auto& timed : poses) {
        GroundTruthRecord rec;
        rec.t = timed.t;
        rec.pose = timed.pose;
        rec.landmarks2d.reserve(landmarks.size());
        for (const auto& point : landmarks.points) {
            LandmarkProjection lm;
            const Eigen::Vector3d p_cam = timed.pose.apply(point);
            if (p_cam.z() > 0.0) {
                lm.uv = project_camera_point(intrinsics, p_cam);
                lm.visible = lm.uv.x() >= 0.0 && lm.uv.x() < geometry.width && lm.uv.y() >= 0.0 &&
                             lm.uv.y() < geometry.height;
            }
            rec.landmarks2d.push_back(lm);
        }
        if (rec.visible_count() < 4) {
            rec.degenerate = true;
        } else {
            try {
                rec.bbox = bbox_from_landmarks(rec.visible_points(), bbox_clearance);
            } catch (const DegeneracyError&) {
                rec.degenerate = true;
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::size_t nearest_time_index(const std::vector<std::int64_t>& times, std::int64_t t) {
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.begin()) {
        return 0;
    }
    if (it == times.end()) {
        return times.size() - 1;
    }
    const auto hi = static_cast<std::size_t>(it - times.begin());
    const auto lo = hi - 1;
    // ties break toward the earlier entry
    return (t - times[lo]) <= (times[hi] - t) ? lo : hi;
}

std::vector<std::pair<const EventFrame*, const GroundTruthRecord*>> assign_labels_to_frames(
    const std::vector<EventFrame>& frames, const std::vector<GroundTruthRecord>& records) {
    if (records.empty()) {
        throw ParameterError("assign_labels_to_frames: record list is empty");
    }
    std::vector<std::int64_t> times;
    times.reserve(records.size());
    for (const auto& rec : records) {
        times.push_back(rec.t);
    }
    std::vector<std::pair<const EventFrame*, const GroundTruthRecord*>> pairs;
    pairs.reserve(frames.size());
    for (const auto& frame : frames) {
        pairs.emplace_back(&frame, &records[nearest_time_index(times, frame.timestamp)]);
    }
    return pairs;
}

}  // namespace evsat
