#include "evsat/trajectory.hpp"

#include <cmath>
#include <string>

#include "evsat/errors.hpp"

namespace evsat {

Pose look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target) {
    const Eigen::Vector3d forward = (target - eye).normalized();
    Eigen::Vector3d up{0.0, 0.0, 1.0};
    if (std::abs(forward.dot(up)) > 0.999) {
        up = Eigen::Vector3d{0.0, 1.0, 0.0};
    }
    // Camera convention: x right, y down, z forward.
    const Eigen::Vector3d x_axis = forward.cross(up).normalized();
    const Eigen::Vector3d y_axis = forward.cross(x_axis).normalized();
    Eigen::Matrix3d r;
    r.row(0) = x_axis;
    r.row(1) = y_axis;
    r.row(2) = forward;
    Pose pose;
    pose.rotation = Eigen::Quaterniond(r).normalized();
    pose.translation = -(r * eye);
    return pose;
}

std::vector<TimedPose> generate_trajectory(const TrajectorySpec& spec) {
    if (spec.speed_mps <= 0.0) {
        throw ParameterError("generate_trajectory: speed must be positive");
    }
    if (spec.duration_s <= 0.0) {
        throw ParameterError("generate_trajectory: duration must be positive");
    }
    if (spec.frame_rate_hz < spec.pose_rate_hz || spec.frame_rate_hz <= 0.0) {
        throw ParameterError("generate_trajectory: frame rate must be >= pose rate and positive");
    }

    if (spec.kind == TrajectoryKind::approach) {
        const double start_distance = spec.start_offset.norm();
        if (spec.speed_mps * spec.duration_s >= start_distance) {
            throw ParameterError(
                "generate_trajectory: approach covers " +
                std::to_string(spec.speed_mps * spec.duration_s) + " m but the camera starts only " +
                std::to_string(start_distance) + " m from the target");
        }
    }

    const auto sample_count =
        static_cast<std::size_t>(std::floor(spec.duration_s * spec.frame_rate_hz + 1e-9)) + 1;
    std::vector<TimedPose> poses;
    poses.reserve(sample_count);

    for (std::size_t i = 0; i < sample_count; ++i) {
        const double t_s = static_cast<double>(i) / spec.frame_rate_hz;
        Eigen::Vector3d eye;
        if (spec.kind == TrajectoryKind::approach) {
            const Eigen::Vector3d start = spec.target_center + spec.start_offset;
            const Eigen::Vector3d dir = (spec.target_center - start).normalized();
            eye = start + dir * (spec.speed_mps * t_s);
        } else {
            const double omega = spec.speed_mps / spec.orbit_radius_m;
            const double theta = omega * t_s;
            eye = spec.target_center + spec.orbit_radius_m * Eigen::Vector3d{std::cos(theta),
                                                                             std::sin(theta), 0.0};
        }
        TimedPose tp;
        tp.t = static_cast<std::int64_t>(std::llround(t_s * 1e6));
        tp.pose = look_at(eye, spec.target_center);
        poses.push_back(tp);
    }
    return poses;
}

std::vector<TimedPose> decimate_poses(const std::vector<TimedPose>& poses, double from_rate_hz,
                                      double to_rate_hz) {
    if (from_rate_hz <= 0.0 || to_rate_hz <= 0.0 || to_rate_hz > from_rate_hz) {
        throw ParameterError("decimate_poses: rates must be positive with to_rate <= from_rate");
    }
    const double ratio = from_rate_hz / to_rate_hz;
    const auto stride = static_cast<std::size_t>(std::llround(ratio));
    if (std::abs(ratio - static_cast<double>(stride)) > 1e-9) {
        throw ParameterError("decimate_poses: from_rate must be an integer multiple of to_rate");
    }
    std::vector<TimedPose> out;
    out.reserve(poses.size() / stride + 1);
    for (std::size_t i = 0; i < poses.size(); i += stride) {
        out.push_back(poses[i]);
    }
    return out;
}

}  // namespace evsat
