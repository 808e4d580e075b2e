#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <string>
#include <vector>

namespace evsat {

/// Pinhole intrinsics (no distortion).
struct CameraIntrinsics {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;

    Eigen::Matrix3d matrix() const {
        Eigen::Matrix3d k = Eigen::Matrix3d::Identity();
        k(0, 0) = fx;
        k(1, 1) = fy;
        k(0, 2) = cx;
        k(1, 2) = cy;
        return k;
    }
};

/// Rigid transform x_out = R x + t. Quaternion is Hamilton, w-first; q and -q
/// denote the same rotation, so all comparisons go through quaternion_angle_deg.
struct Pose {
    Eigen::Quaterniond rotation{1.0, 0.0, 0.0, 0.0};
    Eigen::Vector3d translation{0.0, 0.0, 0.0};

    static Pose identity() { return {}; }

    Eigen::Matrix3d rotation_matrix() const { return rotation.toRotationMatrix(); }

    Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + translation; }

    Pose inverse() const {
        Pose inv;
        inv.rotation = rotation.conjugate();
        inv.translation = -(inv.rotation * translation);
        return inv;
    }
};

/// Composition: compose(a, b) maps x to a(b(x)).
Pose compose(const Pose& a, const Pose& b);

/// Relative transform rel = a^-1 * b, expressed in a's frame.
Pose relative_pose(const Pose& a, const Pose& b);

/// Angle between two unit quaternions in degrees: 2 acos(|<q1, q2>|), the
/// dot clamped to [-1, 1]. Sign-invariant in both arguments.
double quaternion_angle_deg(const Eigen::Quaterniond& q1, const Eigen::Quaterniond& q2);

/// Projects object-frame points through pose and intrinsics. Throws
/// CheiralityError naming the first point with non-positive depth.
std::vector<Eigen::Vector2d> project(const CameraIntrinsics& intrinsics, const Pose& pose,
                                     const std::vector<Eigen::Vector3d>& points);

/// Pinhole projection of a camera-frame point with positive depth.
inline Eigen::Vector2d project_camera_point(const CameraIntrinsics& intrinsics,
                                            const Eigen::Vector3d& p_cam) {
    return {intrinsics.fx * p_cam.x() / p_cam.z() + intrinsics.cx,
            intrinsics.fy * p_cam.y() / p_cam.z() + intrinsics.cy};
}

/// Salient 3D points on the target surface, in the object's canonical frame.
struct LandmarkSet {
    std::vector<Eigen::Vector3d> points;
    std::vector<std::string> labels;  ///< optional, empty or one per point

    std::size_t size() const { return points.size(); }
};

/// Axis-aligned box in pixel coordinates.
struct BoundingBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    Eigen::Vector2d center() const { return {(x_min + x_max) / 2.0, (y_min + y_max) / 2.0}; }
    bool contains(const Eigen::Vector2d& p) const {
        return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
    }
};

/// Tightest box around the points, then width and height scaled by
/// (1 + clearance_fraction) about the box center. A zero-area tight box is a
/// degeneracy error; an empty point list is a parameter error.
BoundingBox bbox_from_landmarks(const std::vector<Eigen::Vector2d>& points2d,
                                double clearance_fraction = 0.10);

}  // namespace evsat
