#pragma once

#include <vector>

#include "evsat/geometry.hpp"
#include "evsat/oracle.hpp"

namespace evsat {

/// Confidence-threshold schedule: keep scores above initial_threshold, and
/// while fewer than min_count survive, multiply the threshold by decay. If it
/// reaches the floor, everything is returned.
struct FilterPolicy {
    double initial_threshold = 0.95;
    int min_count = 15;
    double decay = 0.8;
    double floor = 0.0;
};

struct FilterTrace {
    std::vector<double> thresholds;  ///< every threshold tried, in order
    double final_threshold = 0.0;
    bool floor_reached = false;
    std::vector<std::size_t> kept_indices;  ///< positions of kept items in the input
};

/// Applies the policy, preserving input order. Empty input is a parameter
/// error.
std::vector<Correspondence> filter_correspondences(const std::vector<Correspondence>& corrs,
                                                   const FilterPolicy& policy,
                                                   FilterTrace* trace = nullptr);

struct PnPResult {
    Pose pose;
    std::vector<std::size_t> inlier_indices;  ///< positions in the input list
    double reprojection_rmse_px = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Direct linear transform on normalized coordinates: solves the 2n x 12
/// system for the projection matrix, extracts [R|t] by orthogonal Procrustes
/// (det +1 enforced) and fixes the sign so the mean projective depth is
/// positive. Needs >= 6 correspondences and non-coplanar landmarks.
Pose solve_pnp_linear(const std::vector<Correspondence>& corrs, const LandmarkSet& landmarks,
                      const CameraIntrinsics& intrinsics);

/// Local 6-DoF increment: delta = (rotation vector, translation), applied as
/// rotation <- exp(delta_r) * rotation, translation <- translation + delta_t.
Pose apply_increment(const Pose& pose, const Eigen::Matrix<double, 6, 1>& delta);

/// Confidence-weighted reprojection residuals, r(2i, 2i+1) =
/// sqrt(w_i) * (projection - observation), and optionally the analytic
/// Jacobian with respect to the apply_increment parameterization. Throws
/// CheiralityError if a point has non-positive depth.
Eigen::VectorXd reprojection_residuals(const Pose& pose, const std::vector<Correspondence>& corrs,
                                       const LandmarkSet& landmarks,
                                       const CameraIntrinsics& intrinsics,
                                       Eigen::MatrixXd* jacobian = nullptr);

/// Levenberg-Marquardt refinement of an initial pose. Damping starts at 1e-3,
/// grows 10x on a rejected step and shrinks 10x on an accepted one; accepted
/// costs are non-increasing. Stops when an accepted step improves the cost by
/// less than tol, or at max_iters (converged = false).
PnPResult refine_pose(const Pose& initial, const std::vector<Correspondence>& corrs,
                      const LandmarkSet& landmarks, const CameraIntrinsics& intrinsics,
                      int max_iters = 100, double tol = 1e-10);

/// Full pipeline: filter -> linear solve -> refinement. The result's inliers
/// are the filtered correspondences' positions in the input list.
PnPResult estimate_pose(const std::vector<Correspondence>& corrs, const LandmarkSet& landmarks,
                        const CameraIntrinsics& intrinsics, const FilterPolicy& policy = {});

}  // namespace evsat
