#include "evsat/metrics.hpp"

#include <cmath>

#include "evsat/errors.hpp"
#include "evsat/ground_truth.hpp"

namespace evsat {

std::vector<PosePair> pair_poses(const std::vector<TimedPose>& ground_truth,
                                 const std::vector<TimedPose>& estimates) {
    if (estimates.empty()) {
        throw ParameterError("pair_poses: estimate list is empty");
    }
    std::vector<std::int64_t> est_times;
    est_times.reserve(estimates.size());
    for (const auto& e : estimates) {
        est_times.push_back(e.t);
    }
    std::vector<PosePair> pairs;
    pairs.reserve(ground_truth.size());
    for (const auto& gt : ground_truth) {
        const std::size_t idx = nearest_time_index(est_times, gt.t);
        pairs.push_back(PosePair{gt.t, estimates[idx].pose, gt.pose});
    }
    return pairs;
}

std::vector<StepError> step_errors(const std::vector<PosePair>& pairs) {
    if (pairs.size() < 2) {
        throw ParameterError("step_errors: need at least two pose pairs, got " +
                             std::to_string(pairs.size()));
    }
    std::vector<StepError> steps;
    steps.reserve(pairs.size() - 1);
    for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
        const Pose rel_est = relative_pose(pairs[i].estimated, pairs[i + 1].estimated);
        const Pose rel_gt = relative_pose(pairs[i].ground_truth, pairs[i + 1].ground_truth);
        StepError step;
        step.t = pairs[i + 1].t;
        step.translation_error_m = (rel_est.translation - rel_gt.translation).norm();
        step.rotation_error_deg = quaternion_angle_deg(rel_est.rotation, rel_gt.rotation);
        steps.push_back(step);
    }
    return steps;
}

SequenceErrors aggregate_errors(const std::vector<StepError>& steps) {
    if (steps.empty()) {
        throw ParameterError("aggregate_errors: empty step list");
    }
    SequenceErrors errors;
    errors.per_step = steps;
    double sq_sum = 0.0;
    double deg_sum = 0.0;
    for (const auto& s : steps) {
        sq_sum += s.translation_error_m * s.translation_error_m;
        deg_sum += s.rotation_error_deg;
    }
    const auto n = static_cast<double>(steps.size());
    errors.rms_translation_error_m = std::sqrt(sq_sum / n);
    errors.mean_rotation_error_deg = deg_sum / n;
    return errors;
}

SequenceErrors evaluate_sequence(const std::vector<TimedPose>& ground_truth,
                                 const std::vector<TimedPose>& estimates) {
    return aggregate_errors(step_errors(pair_poses(ground_truth, estimates)));
}

}  // namespace evsat
