#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "evsat/errors.hpp"
#include "evsat/geometry.hpp"
#include "evsat/rng.hpp"

using namespace evsat;

namespace {

Eigen::Quaterniond random_unit_quaternion(Rng& rng) {
    Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
    q.normalize();
    return q;
}

Pose random_pose(Rng& rng, double translation_scale = 1.0) {
    Pose pose;
    pose.rotation = random_unit_quaternion(rng);
    pose.translation = translation_scale * Eigen::Vector3d{rng.normal(), rng.normal(), rng.normal()};
    return pose;
}

}  // namespace

TEST_CASE("project: optical axis maps to the principal point") {
    const CameraIntrinsics k{100, 100, 320, 240};
    const auto uv = project(k, Pose::identity(), {{0.0, 0.0, 1.0}});
    REQUIRE(uv.size() == 1);
    CHECK(uv[0].x() == doctest::Approx(320.0));
    CHECK(uv[0].y() == doctest::Approx(240.0));
}

TEST_CASE("project: lateral offset scales by focal length over depth") {
    const CameraIntrinsics k{100, 100, 320, 240};
    const auto uv = project(k, Pose::identity(), {{0.5, 0.0, 1.0}});
    CHECK(uv[0].x() == doctest::Approx(370.0));
    CHECK(uv[0].y() == doctest::Approx(240.0));
}

TEST_CASE("project: agrees with an independent homogeneous matrix product") {
    Rng rng(3);
    const CameraIntrinsics k{431.5, 512.25, 317.0, 246.5};
    for (int trial = 0; trial < 100; ++trial) {
        Pose pose = random_pose(rng);
        pose.translation.z() += 5.0;  // keep points in front
        std::vector<Eigen::Vector3d> points;
        for (int i = 0; i < 10; ++i) {
            points.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        }
        const auto uv = project(k, pose, points);

        // oracle: p ~ K [R|t] P in homogeneous coordinates
        Eigen::Matrix<double, 3, 4> rt;
        rt.leftCols<3>() = pose.rotation_matrix();
        rt.rightCols<1>() = pose.translation;
        const Eigen::Matrix<double, 3, 4> p_mat = k.matrix() * rt;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const Eigen::Vector4d ph(points[i].x(), points[i].y(), points[i].z(), 1.0);
            const Eigen::Vector3d proj = p_mat * ph;
            CHECK(uv[i].x() == doctest::Approx(proj.x() / proj.z()).epsilon(1e-9));
            CHECK(uv[i].y() == doctest::Approx(proj.y() / proj.z()).epsilon(1e-9));
        }
    }
}

TEST_CASE("project: cheirality failure names the point") {
    const CameraIntrinsics k{100, 100, 0, 0};
    try {
        project(k, Pose::identity(), {{0, 0, 1}, {0, 0, -1}});
        FAIL("expected CheiralityError");
    } catch (const CheiralityError& e) {
        CHECK(e.point_index() == 1);
    }
}

TEST_CASE("project: equivariance under pre-transformation of the points") {
    Rng rng(5);
    const CameraIntrinsics k{500, 500, 320, 240};
    for (int trial = 0; trial < 50; ++trial) {
        Pose pose = random_pose(rng);
        pose.translation.z() += 6.0;
        const Pose t = random_pose(rng, 0.3);
        std::vector<Eigen::Vector3d> points, transformed;
        for (int i = 0; i < 8; ++i) {
            points.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
            transformed.push_back(t.apply(points.back()));
        }
        const auto direct = project(k, pose, transformed);
        const auto composed = project(k, compose(pose, t), points);
        for (std::size_t i = 0; i < points.size(); ++i) {
            CHECK((direct[i] - composed[i]).norm() < 1e-9);
        }
    }
}

TEST_CASE("relative_pose: self-relative is the identity") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Pose a = random_pose(rng);
        const Pose rel = relative_pose(a, a);
        CHECK(quaternion_angle_deg(rel.rotation, Eigen::Quaterniond::Identity()) < 1e-9);
        CHECK(rel.translation.norm() < 1e-12);
    }
}

TEST_CASE("relative_pose: relative to identity is the pose itself") {
    Rng rng(9);
    const Pose b = random_pose(rng);
    const Pose rel = relative_pose(Pose::identity(), b);
    CHECK(quaternion_angle_deg(rel.rotation, b.rotation) < 1e-9);
    CHECK((rel.translation - b.translation).norm() < 1e-12);
}

TEST_CASE("relative_pose: composition round trip recovers the second pose") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const Pose a = random_pose(rng);
        const Pose b = random_pose(rng);
        const Pose again = compose(a, relative_pose(a, b));
        CHECK(quaternion_angle_deg(again.rotation, b.rotation) < 1e-9);
        CHECK((again.translation - b.translation).norm() < 1e-9);
    }
}

TEST_CASE("quaternion_angle_deg: identical and antipodal quaternions give zero") {
    Rng rng(13);
    const auto q = random_unit_quaternion(rng);
    CHECK(quaternion_angle_deg(q, q) == doctest::Approx(0.0).epsilon(1e-12));
    const Eigen::Quaterniond neg(-q.w(), -q.x(), -q.y(), -q.z());
    CHECK(quaternion_angle_deg(q, neg) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("quaternion_angle_deg: 10 degree rotation about x") {
    const double half = 5.0 * std::numbers::pi / 180.0;
    const Eigen::Quaterniond q(std::cos(half), std::sin(half), 0.0, 0.0);
    CHECK(quaternion_angle_deg(Eigen::Quaterniond::Identity(), q) == doctest::Approx(10.0));
}

TEST_CASE("quaternion_angle_deg property: symmetric and sign-invariant") {
    Rng rng(15);
    for (int trial = 0; trial < 100; ++trial) {
        const auto q1 = random_unit_quaternion(rng);
        const auto q2 = random_unit_quaternion(rng);
        const double a = quaternion_angle_deg(q1, q2);
        CHECK(a == doctest::Approx(quaternion_angle_deg(q2, q1)).epsilon(1e-12));
        const Eigen::Quaterniond neg(-q2.w(), -q2.x(), -q2.y(), -q2.z());
        CHECK(a == doctest::Approx(quaternion_angle_deg(q1, neg)).epsilon(1e-12));
        CHECK(a >= 0.0);
        CHECK(a <= 180.0);
    }
}

TEST_CASE("bbox_from_landmarks: centered 10% clearance") {
    const auto box = bbox_from_landmarks({{10, 10}, {20, 20}}, 0.10);
    CHECK(box.x_min == doctest::Approx(9.5));
    CHECK(box.y_min == doctest::Approx(9.5));
    CHECK(box.x_max == doctest::Approx(20.5));
    CHECK(box.y_max == doctest::Approx(20.5));
}

TEST_CASE("bbox_from_landmarks: degenerate and empty inputs") {
    CHECK_THROWS_AS(bbox_from_landmarks({{5, 5}}, 0.10), DegeneracyError);
    CHECK_THROWS_AS(bbox_from_landmarks({{5, 5}, {5, 9}}, 0.10), DegeneracyError);  // zero width
    CHECK_THROWS_AS(bbox_from_landmarks({}, 0.10), ParameterError);
}

TEST_CASE("bbox_from_landmarks: zero clearance is the tight box and contains all points") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Eigen::Vector2d> pts;
        for (int i = 0; i < 12; ++i) {
            pts.emplace_back(rng.uniform(0, 640), rng.uniform(0, 480));
        }
        const auto box = bbox_from_landmarks(pts, 0.0);
        for (const auto& p : pts) {
            CHECK(box.contains(p));
        }
        double x_min = pts[0].x(), x_max = pts[0].x();
        for (const auto& p : pts) {
            x_min = std::min(x_min, p.x());
            x_max = std::max(x_max, p.x());
        }
        CHECK(box.x_min == doctest::Approx(x_min).epsilon(1e-12));
        CHECK(box.x_max == doctest::Approx(x_max).epsilon(1e-12));
    }
}
