#include "evsat/events.hpp"

#include <algorithm>
#include <string>

#include "evsat/errors.hpp"

namespace evsat {

bool EventStream::is_sorted() const {
    return std::is_sorted(events.begin(), events.end(),
                          [](const Event& a, const Event& b) { return a.t < b.t; });
}

std::vector<EventBatch> batch_events(const EventStream& stream, std::int64_t tau_us,
                                     std::optional<std::int64_t> window_anchor) {
    if (tau_us <= 0) {
        throw ParameterError("batch_events: tau must be positive, got " + std::to_string(tau_us));
    }
    if (!stream.is_sorted()) {
        throw ValidationError("batch_events: event stream is not sorted by timestamp");
    }
    std::vector<EventBatch> batches;
    if (stream.events.empty()) {
        return batches;
    }

    const std::int64_t first_t = stream.events.front().t;
    const std::int64_t last_t = stream.events.back().t;
    const std::int64_t anchor = window_anchor.value_or(first_t);
    if (anchor > first_t) {
        throw ParameterError("batch_events: window_anchor " + std::to_string(anchor) +
                             " is after the first event at " + std::to_string(first_t));
    }

    // First window containing an event; leading empty windows are skipped so
    // the default (anchor == first_t) starts exactly at the first event.
    const std::int64_t k0 = (first_t - anchor) / tau_us;
    const std::int64_t k1 = (last_t - anchor) / tau_us;
    batches.reserve(static_cast<std::size_t>(k1 - k0 + 1));

    const Event* base = stream.events.data();
    std::size_t i = 0;
    const std::size_t n = stream.events.size();
    const std::int64_t stream_end = last_t + 1;  // exclusive
    for (std::int64_t k = k0; k <= k1; ++k) {
        const std::int64_t start = anchor + k * tau_us;
        const std::int64_t end = start + tau_us;
        const std::size_t begin_idx = i;
        while (i < n && base[i].t < end) {
            ++i;
        }
        EventBatch batch;
        batch.events = std::span<const Event>(base + begin_idx, i - begin_idx);
        batch.window_start = start;
        if (k == k1 && stream_end < end) {
            batch.window_duration = stream_end - start;
            batch.partial = true;
        } else {
            batch.window_duration = tau_us;
        }
        batches.push_back(batch);
    }
    return batches;
}

EventFrame events_to_frame(const EventBatch& batch, const SensorGeometry& geometry) {
    const int width = geometry.width;
    const int height = geometry.height;
    EventFrame frame;
    frame.window_start = batch.window_start;
    frame.window_duration = batch.window_duration;
    frame.timestamp = batch.window_start + batch.window_duration / 2;
    frame.pixels = Image<float>(width, height, 0.0f);

    if (batch.empty()) {
        return frame;
    }

    std::vector<std::uint32_t> counts(geometry.pixel_count(), 0);
    const Event* ev = batch.events.data();
    const std::size_t n = batch.events.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (ev[i].x >= width || ev[i].y >= height) {
            throw ValidationError("events_to_frame: event " + std::to_string(i) + " at (" +
                                  std::to_string(ev[i].x) + "," + std::to_string(ev[i].y) +
                                  ") is outside the " + std::to_string(width) + "x" +
                                  std::to_string(height) + " sensor");
        }
        ++counts[static_cast<std::size_t>(ev[i].y) * width + ev[i].x];
    }

    std::uint32_t max_count = 0;
    for (std::uint32_t c : counts) {
        max_count = std::max(max_count, c);
    }
    // Plain division keeps count == max at exactly 1.0.
    const float denom = static_cast<float>(max_count);
    float* out = frame.pixels.data.data();
    for (std::size_t i = 0; i < counts.size(); ++i) {
        out[i] = static_cast<float>(counts[i]) / denom;
    }
    return frame;
}

}  // namespace evsat
