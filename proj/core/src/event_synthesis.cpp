#include "evsat/event_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evsat/errors.hpp"

namespace evsat {

EventSynthesizer::EventSynthesizer(double contrast_threshold, std::int64_t timestamp_resolution_us)
    : contrast_(contrast_threshold), resolution_us_(timestamp_resolution_us) {
    if (contrast_threshold <= 0.0) {
        throw ParameterError("EventSynthesizer: contrast threshold must be positive");
    }
    if (timestamp_resolution_us <= 0) {
        throw ParameterError("EventSynthesizer: timestamp resolution must be positive");
    }
}

void EventSynthesizer::push(const IntensityFrame& frame, std::vector<Event>& out) {
    const auto n_px = frame.pixels.pixel_count();
    if (frames_seen_ == 0) {
        width_ = frame.pixels.width;
        height_ = frame.pixels.height;
        ref_log_.resize(n_px);
        last_values_.resize(n_px);
        last_logs_.resize(n_px);
        for (std::size_t i = 0; i < n_px; ++i) {
            const float v = frame.pixels.data[i];
            const double log_v = std::log(static_cast<double>(v) + 1.0);
            ref_log_[i] = log_v;
            last_values_[i] = v;
            last_logs_[i] = log_v;
        }
        last_t_ = frame.t;
        frames_seen_ = 1;
        return;
    }
    if (frame.pixels.width != width_ || frame.pixels.height != height_) {
        throw ValidationError("EventSynthesizer: frame size changed mid-sequence");
    }
    const std::int64_t gap = frame.t - last_t_;
    if (gap <= 0) {
        throw ValidationError("EventSynthesizer: frame timestamps must be strictly increasing");
    }
    if (frames_seen_ == 1) {
        frame_gap_us_ = gap;
    } else if (gap != frame_gap_us_) {
        throw ValidationError("EventSynthesizer: non-uniform frame spacing (" + std::to_string(gap) +
                              " us after " + std::to_string(frame_gap_us_) + " us)");
    }

    scratch_.clear();
    const std::int64_t t0 = last_t_;
    for (std::size_t i = 0; i < n_px; ++i) {
        // unchanged pixels (most of the frame) reuse the cached log
        const float value = frame.pixels.data[i];
        double log_new;
        if (value == last_values_[i]) {
            log_new = last_logs_[i];
        } else {
            log_new = std::log(static_cast<double>(value) + 1.0);
            last_values_[i] = value;
            last_logs_[i] = log_new;
        }
        const double delta = log_new - ref_log_[i];
        const double mag = std::abs(delta);
        if (mag < contrast_) {
            continue;
        }
        const auto count = static_cast<std::int64_t>(std::floor(mag / contrast_));
        const std::int8_t polarity = delta > 0.0 ? std::int8_t{1} : std::int8_t{-1};
        const auto x = static_cast<std::uint16_t>(i % static_cast<std::size_t>(width_));
        const auto y = static_cast<std::uint16_t>(i / static_cast<std::size_t>(width_));
        for (std::int64_t m = 1; m <= count; ++m) {
            // m-th threshold crossing under a linear ramp across the interval
            const double fraction = static_cast<double>(m) * contrast_ / mag;
            std::int64_t t = t0 + static_cast<std::int64_t>(fraction * static_cast<double>(gap));
            t = t0 + ((t - t0) / resolution_us_) * resolution_us_;
            scratch_.push_back(Event{t, x, y, polarity});
        }
        ref_log_[i] += static_cast<double>(count) * contrast_ * static_cast<double>(polarity);
    }
    std::stable_sort(scratch_.begin(), scratch_.end(),
                     [](const Event& a, const Event& b) { return a.t < b.t; });
    out.insert(out.end(), scratch_.begin(), scratch_.end());
    last_t_ = frame.t;
    ++frames_seen_;
}

EventStream frames_to_events(std::span<const IntensityFrame> frames, double contrast_threshold,
                             const SensorGeometry& geometry,
                             std::int64_t timestamp_resolution_us) {
    if (frames.size() < 2) {
        throw ParameterError("frames_to_events: need at least two frames, got " +
                             std::to_string(frames.size()));
    }
    EventSynthesizer synth(contrast_threshold, timestamp_resolution_us);
    EventStream stream;
    stream.geometry = geometry;
    for (const auto& frame : frames) {
        synth.push(frame, stream.events);
    }
    return stream;
}

}  // namespace evsat
