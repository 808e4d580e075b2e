#pragma once

#include <cstdint>
#include <vector>

#include "evsat/geometry.hpp"

namespace evsat {

/// A pose with its timestamp in microseconds.
struct TimedPose {
    std::int64_t t = 0;
    Pose pose;
};

enum class TrajectoryKind { approach, orbit };

/// Rendezvous trajectory description. The camera always aims at target_center.
/// Reference speeds: approach 0.0332 / 0.2186 m/s, orbit 0.0142 / 0.3007 m/s.
struct TrajectorySpec {
    TrajectoryKind kind = TrajectoryKind::orbit;
    double speed_mps = 0.0142;
    double duration_s = 10.0;
    double pose_rate_hz = 10.0;    ///< ground-truth decimation rate
    double frame_rate_hz = 100.0;  ///< render/sample rate
    Eigen::Vector3d target_center{0.0, 0.0, 0.0};
    Eigen::Vector3d start_offset{0.0, 0.0, -2.0};  ///< approach start, relative to target
    double orbit_radius_m = 1.0;
};

/// World-to-camera look-at pose: camera at eye, optical axis through target.
/// Degenerates are resolved by switching the up hint.
Pose look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target);

/// Samples the trajectory at frame_rate_hz, starting at t = 0. Poses are
/// world-to-camera, so they project world points directly. An approach whose
/// camera would reach the target before duration_s ends is a parameter error.
std::vector<TimedPose> generate_trajectory(const TrajectorySpec& spec);

/// Keeps every (from_rate / to_rate)-th pose; rates must divide evenly.
std::vector<TimedPose> decimate_poses(const std::vector<TimedPose>& poses, double from_rate_hz,
                                      double to_rate_hz);

}  // namespace evsat
