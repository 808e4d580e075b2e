#include "evsat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "evsat/errors.hpp"

namespace evsat {

Pose compose(const Pose& a, const Pose& b) {
    Pose out;
    out.rotation = (a.rotation * b.rotation).normalized();
    out.translation = a.rotation * b.translation + a.translation;
    return out;
}

Pose relative_pose(const Pose& a, const Pose& b) {
    Pose rel;
    rel.rotation = (a.rotation.conjugate() * b.rotation).normalized();
    rel.translation = a.rotation.conjugate() * (b.translation - a.translation);
    return rel;
}

double quaternion_angle_deg(const Eigen::Quaterniond& q1, const Eigen::Quaterniond& q2) {
    const double dot = std::clamp(std::abs(q1.dot(q2)), 0.0, 1.0);
    double angle;
    if (dot > 0.999) {
        // same value as 2 acos(dot), but without the acos noise floor near 1
        const double d_minus = (q1.coeffs() - q2.coeffs()).norm();
        const double d_plus = (q1.coeffs() + q2.coeffs()).norm();
        const double delta = std::min(d_minus, d_plus);
        angle = 4.0 * std::asin(std::min(delta / 2.0, 1.0));
    } else {
        angle = 2.0 * std::acos(dot);
    }
    return angle * 180.0 / std::numbers::pi;
}

std::vector<Eigen::Vector2d> project(const CameraIntrinsics& intrinsics, const Pose& pose,
                                     const std::vector<Eigen::Vector3d>& points) {
    std::vector<Eigen::Vector2d> out;
    out.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Eigen::Vector3d p_cam = pose.apply(points[i]);
        if (p_cam.z() <= 0.0) {
            throw CheiralityError("project: point " + std::to_string(i) +
                                      " has non-positive depth " + std::to_string(p_cam.z()),
                                  i);
        }
        out.push_back(project_camera_point(intrinsics, p_cam));
    }
    return out;
}

BoundingBox bbox_from_landmarks(const std::vector<Eigen::Vector2d>& points2d,
                                double clearance_fraction) {
    if (points2d.empty()) {
        throw ParameterError("bbox_from_landmarks: empty point list");
    }
    BoundingBox box;
    box.x_min = box.x_max = points2d.front().x();
    box.y_min = box.y_max = points2d.front().y();
    for (const auto& p : points2d) {
        box.x_min = std::min(box.x_min, p.x());
        box.x_max = std::max(box.x_max, p.x());
        box.y_min = std::min(box.y_min, p.y());
        box.y_max = std::max(box.y_max, p.y());
    }
    if (box.width() <= 0.0 || box.height() <= 0.0) {
        throw DegeneracyError("bbox_from_landmarks: degenerate zero-area box (width " +
                              std::to_string(box.width()) + ", height " +
                              std::to_string(box.height()) + ")");
    }
    // symmetric expansion about the center; exact at zero clearance
    const double expand_x = clearance_fraction / 2.0 * box.width();
    const double expand_y = clearance_fraction / 2.0 * box.height();
    return {box.x_min - expand_x, box.y_min - expand_y, box.x_max + expand_x, box.y_max + expand_y};
}

}  // namespace evsat
