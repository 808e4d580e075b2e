#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "evsat/events.hpp"
#include "evsat/render.hpp"

namespace evsat {

/// Incremental log-intensity change detector turning a frame sequence into an
/// event stream. Per pixel it keeps a reference log intensity ln(I + 1);
/// whenever a new frame moves the log intensity by at least the contrast
/// threshold, floor(|dL| / C) events fire with timestamps interpolated across
/// the inter-frame interval, quantized to the timestamp resolution, and the
/// reference advances by the emitted multiple of C (the residual carries
/// forward).
class EventSynthesizer {
public:
    explicit EventSynthesizer(double contrast_threshold, std::int64_t timestamp_resolution_us = 10000);

    /// Feeds the next frame; frames must arrive in time order with uniform
    /// spacing. Appends generated events (time-sorted) to the stream.
    void push(const IntensityFrame& frame, std::vector<Event>& out);

    std::size_t frames_seen() const { return frames_seen_; }

private:
    double contrast_;
    std::int64_t resolution_us_;
    std::int64_t last_t_ = 0;
    std::int64_t frame_gap_us_ = 0;
    std::size_t frames_seen_ = 0;
    int width_ = 0;
    int height_ = 0;
    std::vector<double> ref_log_;
    std::vector<float> last_values_;   // last frame, for the log cache
    std::vector<double> last_logs_;
    std::vector<Event> scratch_;
};

/// Whole-sequence variant of EventSynthesizer. Needs at least two uniformly
/// spaced frames; the result is sorted and carries the given geometry.
EventStream frames_to_events(std::span<const IntensityFrame> frames, double contrast_threshold,
                             const SensorGeometry& geometry,
                             std::int64_t timestamp_resolution_us = 10000);

}  // namespace evsat
