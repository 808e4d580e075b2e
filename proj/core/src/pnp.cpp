#include "evsat/pnp.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "evsat/errors.hpp"

namespace evsat {

std::vector<Correspondence> filter_correspondences(const std::vector<Correspondence>& corrs,
                                                   const FilterPolicy& policy, FilterTrace* trace) {
    if (corrs.empty()) {
        throw ParameterError("filter_correspondences: empty correspondence list");
    }
    if (policy.decay <= 0.0 || policy.decay >= 1.0) {
        throw ParameterError("filter_correspondences: decay must lie in (0, 1)");
    }
    if (policy.min_count < 4) {
        throw ParameterError("filter_correspondences: min_count must be at least 4");
    }

    const std::size_t n = corrs.size();
    const auto target = std::min<std::size_t>(static_cast<std::size_t>(policy.min_count), n);
    auto count_kept = [&](double threshold) {
        return static_cast<std::size_t>(std::count_if(
            corrs.begin(), corrs.end(),
            [&](const Correspondence& c) { return c.confidence > threshold; }));
    };

    double threshold = policy.initial_threshold;
    bool floor_reached = false;
    while (true) {
        if (trace) {
            trace->thresholds.push_back(threshold);
        }
        if (count_kept(threshold) >= target) {
            break;
        }
        threshold *= policy.decay;
        if (threshold <= policy.floor) {
            floor_reached = true;
            break;
        }
    }
    if (trace) {
        trace->final_threshold = threshold;
        trace->floor_reached = floor_reached;
    }
    std::vector<Correspondence> kept;
    kept.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // floor fallback keeps everything
        if (floor_reached || corrs[i].confidence > threshold) {
            kept.push_back(corrs[i]);
            if (trace) {
                trace->kept_indices.push_back(i);
            }
        }
    }
    return kept;
}

namespace {

const Eigen::Vector3d& landmark_of(const LandmarkSet& landmarks, const Correspondence& corr) {
    const auto idx = static_cast<std::size_t>(corr.landmark_index);
    if (corr.landmark_index < 0 || idx >= landmarks.size()) {
        throw ParameterError("pnp: correspondence references landmark " +
                             std::to_string(corr.landmark_index) + " of a set of " +
                             std::to_string(landmarks.size()));
    }
    return landmarks.points[idx];
}

}  // namespace

Pose solve_pnp_linear(const std::vector<Correspondence>& corrs, const LandmarkSet& landmarks,
                      const CameraIntrinsics& intrinsics) {
    const std::size_t n = corrs.size();
    if (n < 6) {
        throw ParameterError("solve_pnp_linear: need at least 6 correspondences, got " +
                             std::to_string(n));
    }

    // Normalized image coordinates (undo the intrinsics).
    Eigen::Matrix2Xd obs(2, n);
    Eigen::Matrix3Xd pts(3, n);
    for (std::size_t i = 0; i < n; ++i) {
        obs.col(static_cast<Eigen::Index>(i)) =
            Eigen::Vector2d{(corrs[i].uv.x() - intrinsics.cx) / intrinsics.fx,
                            (corrs[i].uv.y() - intrinsics.cy) / intrinsics.fy};
        pts.col(static_cast<Eigen::Index>(i)) = landmark_of(landmarks, corrs[i]);
    }

    // Hartley conditioning on both sides.
    const Eigen::Vector2d obs_centroid = obs.rowwise().mean();
    const double obs_scale =
        std::sqrt(2.0) / std::max(1e-300, (obs.colwise() - obs_centroid).colwise().norm().mean());
    const Eigen::Vector3d pts_centroid = pts.rowwise().mean();
    const double pts_scale =
        std::sqrt(3.0) / std::max(1e-300, (pts.colwise() - pts_centroid).colwise().norm().mean());

    Eigen::MatrixXd a(2 * n, 12);
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Index ei = static_cast<Eigen::Index>(i);
        const Eigen::Vector2d m = (obs.col(ei) - obs_centroid) * obs_scale;
        const Eigen::Vector3d x3 = (pts.col(ei) - pts_centroid) * pts_scale;
        const Eigen::Vector4d xh(x3.x(), x3.y(), x3.z(), 1.0);
        a.row(2 * ei).segment<4>(0).setZero();
        a.row(2 * ei).segment<4>(4) = -xh.transpose();
        a.row(2 * ei).segment<4>(8) = m.y() * xh.transpose();
        a.row(2 * ei + 1).segment<4>(0) = xh.transpose();
        a.row(2 * ei + 1).segment<4>(4).setZero();
        a.row(2 * ei + 1).segment<4>(8) = -m.x() * xh.transpose();
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    // rank < 11 means a solution family: degenerate geometry
    if (sv(10) < 1e-9 * sv(0)) {
        throw DegeneracyError("solve_pnp_linear: rank-deficient system (degenerate geometry)");
    }
    Eigen::Matrix<double, 3, 4> p_cond;
    const Eigen::VectorXd v = svd.matrixV().col(11);
    p_cond.row(0) = v.segment<4>(0).transpose();
    p_cond.row(1) = v.segment<4>(4).transpose();
    p_cond.row(2) = v.segment<4>(8).transpose();

    // Undo conditioning: P = T_obs^-1 * P_cond * T_pts.
    Eigen::Matrix3d t_obs_inv = Eigen::Matrix3d::Identity();
    t_obs_inv(0, 0) = 1.0 / obs_scale;
    t_obs_inv(1, 1) = 1.0 / obs_scale;
    t_obs_inv(0, 2) = obs_centroid.x();
    t_obs_inv(1, 2) = obs_centroid.y();
    Eigen::Matrix4d t_pts = Eigen::Matrix4d::Identity();
    t_pts.topLeftCorner<3, 3>() *= pts_scale;
    t_pts.topRightCorner<3, 1>() = -pts_scale * pts_centroid;
    Eigen::Matrix<double, 3, 4> p = t_obs_inv * p_cond * t_pts;

    // Sign: mean projective depth of the landmarks must be positive.
    double depth_sign = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector4d xh(pts(0, static_cast<Eigen::Index>(i)),
                                 pts(1, static_cast<Eigen::Index>(i)),
                                 pts(2, static_cast<Eigen::Index>(i)), 1.0);
        depth_sign += p.row(2) * xh;
    }
    if (depth_sign < 0.0) {
        p = -p;
    }

    // Nearest rotation (orthogonal Procrustes) and common scale.
    const Eigen::Matrix3d b = p.topLeftCorner<3, 3>();
    Eigen::JacobiSVD<Eigen::Matrix3d> proc(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d u = proc.matrixU();
    Eigen::Matrix3d vt = proc.matrixV().transpose();
    Eigen::Matrix3d r = u * vt;
    if (r.determinant() < 0.0) {
        u.col(2) *= -1.0;
        r = u * vt;
    }
    const double scale = proc.singularValues().mean();
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw DegeneracyError("solve_pnp_linear: projection matrix has no usable scale");
    }

    Pose pose;
    pose.rotation = Eigen::Quaterniond(r).normalized();
    pose.translation = p.topRightCorner<3, 1>() / scale;

    for (std::size_t i = 0; i < n; ++i) {
        const double depth = pose.apply(pts.col(static_cast<Eigen::Index>(i))).z();
        if (depth <= 0.0) {
            throw CheiralityError("solve_pnp_linear: landmark " + std::to_string(i) +
                                      " lies behind the recovered camera",
                                  i);
        }
    }
    return pose;
}

Pose apply_increment(const Pose& pose, const Eigen::Matrix<double, 6, 1>& delta) {
    const Eigen::Vector3d omega = delta.head<3>();
    const double angle = omega.norm();
    Eigen::Quaterniond dq;
    if (angle < 1e-12) {
        dq = Eigen::Quaterniond(1.0, omega.x() / 2.0, omega.y() / 2.0, omega.z() / 2.0);
    } else {
        const Eigen::Vector3d axis = omega / angle;
        dq = Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis));
    }
    Pose out;
    out.rotation = (dq * pose.rotation).normalized();
    out.translation = pose.translation + delta.tail<3>();
    return out;
}

Eigen::VectorXd reprojection_residuals(const Pose& pose, const std::vector<Correspondence>& corrs,
                                       const LandmarkSet& landmarks,
                                       const CameraIntrinsics& intrinsics,
                                       Eigen::MatrixXd* jacobian) {
    const std::size_t n = corrs.size();
    Eigen::VectorXd residuals(2 * n);
    if (jacobian) {
        jacobian->resize(2 * static_cast<Eigen::Index>(n), 6);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector3d rotated = pose.rotation * landmark_of(landmarks, corrs[i]);
        const Eigen::Vector3d p_cam = rotated + pose.translation;
        if (p_cam.z() <= 0.0) {
            throw CheiralityError("reprojection_residuals: point " + std::to_string(i) +
                                      " has non-positive depth",
                                  i);
        }
        const double w = std::sqrt(std::max(0.0, corrs[i].confidence));
        const Eigen::Vector2d proj = project_camera_point(intrinsics, p_cam);
        const Eigen::Index ei = static_cast<Eigen::Index>(i);
        residuals.segment<2>(2 * ei) = w * (proj - corrs[i].uv);
        if (jacobian) {
            const double inv_z = 1.0 / p_cam.z();
            Eigen::Matrix<double, 2, 3> d_proj;
            d_proj << intrinsics.fx * inv_z, 0.0, -intrinsics.fx * p_cam.x() * inv_z * inv_z, 0.0,
                intrinsics.fy * inv_z, -intrinsics.fy * p_cam.y() * inv_z * inv_z;
            Eigen::Matrix3d neg_skew;
            neg_skew << 0.0, rotated.z(), -rotated.y(), -rotated.z(), 0.0, rotated.x(), rotated.y(),
                -rotated.x(), 0.0;
            jacobian->block<2, 3>(2 * ei, 0) = w * d_proj * neg_skew;
            jacobian->block<2, 3>(2 * ei, 3) = w * d_proj;
        }
    }
    return residuals;
}

PnPResult refine_pose(const Pose& initial, const std::vector<Correspondence>& corrs,
                      const LandmarkSet& landmarks, const CameraIntrinsics& intrinsics,
                      int max_iters, double tol) {
    if (corrs.empty()) {
        throw ParameterError("refine_pose: empty correspondence list");
    }
    PnPResult result;
    result.pose = initial;

    auto unweighted_rmse = [&](const Pose& pose) {
        double sum = 0.0;
        for (const auto& corr : corrs) {
            const Eigen::Vector3d p_cam = pose.apply(landmark_of(landmarks, corr));
            sum += (project_camera_point(intrinsics, p_cam) - corr.uv).squaredNorm();
        }
        return std::sqrt(sum / static_cast<double>(corrs.size()));
    };

    Eigen::MatrixXd jac;
    Eigen::VectorXd r = reprojection_residuals(result.pose, corrs, landmarks, intrinsics, &jac);
    double cost = r.squaredNorm();
    if (!std::isfinite(cost)) {
        throw NumericalError("refine_pose: non-finite initial cost");
    }

    double lambda = 1e-3;
    int iter = 0;
    while (iter < max_iters && cost >= tol) {
        ++iter;
        const Eigen::Matrix<double, 6, 6> jtj = jac.transpose() * jac;
        const Eigen::Matrix<double, 6, 1> jtr = jac.transpose() * r;
        Eigen::Matrix<double, 6, 6> damped = jtj;
        for (int d = 0; d < 6; ++d) {
            damped(d, d) += lambda * std::max(jtj(d, d), 1e-12);
        }
        const Eigen::Matrix<double, 6, 1> step = damped.ldlt().solve(-jtr);
        const Pose trial = apply_increment(result.pose, step);

        double trial_cost = std::numeric_limits<double>::infinity();
        Eigen::MatrixXd trial_jac;
        Eigen::VectorXd trial_r;
        try {
            trial_r = reprojection_residuals(trial, corrs, landmarks, intrinsics, &trial_jac);
            trial_cost = trial_r.squaredNorm();
        } catch (const CheiralityError&) {
            // step pushed a point behind the camera: treat as rejected
        }

        if (std::isfinite(trial_cost) && trial_cost < cost) {
            const double decrease = cost - trial_cost;
            result.pose = trial;
            r = std::move(trial_r);
            jac = std::move(trial_jac);
            cost = trial_cost;
            lambda = std::max(lambda * 0.1, 1e-12);
            if (decrease < tol) {
                result.converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) {
                result.converged = true;  // no improving direction left
                break;
            }
        }
    }
    if (cost < tol) {
        result.converged = true;
    }
    result.iterations = iter;
    result.reprojection_rmse_px = unweighted_rmse(result.pose);
    result.inlier_indices.resize(corrs.size());
    for (std::size_t i = 0; i < corrs.size(); ++i) {
        result.inlier_indices[i] = i;
    }
    return result;
}

PnPResult estimate_pose(const std::vector<Correspondence>& corrs, const LandmarkSet& landmarks,
                        const CameraIntrinsics& intrinsics, const FilterPolicy& policy) {
    FilterTrace trace;
    const std::vector<Correspondence> kept = filter_correspondences(corrs, policy, &trace);
    if (kept.size() < 6) {
        throw DegeneracyError("estimate_pose: only " + std::to_string(kept.size()) +
                              " correspondences survive filtering; need at least 6");
    }
    const Pose linear = solve_pnp_linear(kept, landmarks, intrinsics);
    PnPResult result = refine_pose(linear, kept, landmarks, intrinsics);
    result.inlier_indices = trace.kept_indices;  // positions in the caller's list
    return result;
}

}  // namespace evsat
