#pragma once

#include <cstdint>
#include <vector>

#include "evsat/geometry.hpp"
#include "evsat/trajectory.hpp"

namespace evsat {

/// A ground-truth pose matched with the estimate closest in time.
struct PosePair {
    std::int64_t t = 0;  ///< ground-truth timestamp
    Pose estimated;
    Pose ground_truth;
};

/// Relative-transform error of one consecutive pose step.
struct StepError {
    std::int64_t t = 0;  ///< timestamp of the later pose in the step
    double translation_error_m = 0.0;
    double rotation_error_deg = 0.0;
};

/// Per-step errors plus their aggregates: RMS of the translation errors and
/// arithmetic mean of the rotation errors.
struct SequenceErrors {
    std::vector<StepError> per_step;
    double rms_translation_error_m = 0.0;
    double mean_rotation_error_deg = 0.0;
};

/// Matches every ground-truth pose with the estimate nearest in time (ties to
/// the earlier estimate). Both sequences must be sorted; empty estimates are
/// a parameter error.
std::vector<PosePair> pair_poses(const std::vector<TimedPose>& ground_truth,
                                 const std::vector<TimedPose>& estimates);

/// For each consecutive pair of pose pairs, compares the relative transform
/// of the estimated track against the ground-truth track: translation error is
/// the Euclidean distance of the relative translations, rotation error the
/// quaternion angle of the relative rotations.
std::vector<StepError> step_errors(const std::vector<PosePair>& pairs);

SequenceErrors aggregate_errors(const std::vector<StepError>& steps);

/// pair_poses + step_errors + aggregate_errors in one call.
SequenceErrors evaluate_sequence(const std::vector<TimedPose>& ground_truth,
                                 const std::vector<TimedPose>& estimates);

}  // namespace evsat
