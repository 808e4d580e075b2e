#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "evsat/image.hpp"

namespace evsat {

/// A single sensor event: pixel location, polarity and timestamp.
struct Event {
    std::int64_t t = 0;   ///< microseconds, non-negative
    std::uint16_t x = 0;  ///< pixel column
    std::uint16_t y = 0;  ///< pixel row
    std::int8_t p = 1;    ///< polarity, +1 or -1

    bool operator==(const Event&) const = default;
};

/// Sensor resolution. Defaults match a 640x480 DVS.
struct SensorGeometry {
    int width = 640;
    int height = 480;

    bool contains(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    bool operator==(const SensorGeometry&) const = default;
};

/// Time-ordered event sequence with the geometry it was captured on.
struct EventStream {
    std::vector<Event> events;
    SensorGeometry geometry;

    bool is_sorted() const;
};

/// Events falling in one half-open time window [window_start, window_start + window_duration).
/// Holds a view into the source stream; valid while the stream is alive.
struct EventBatch {
    std::span<const Event> events;
    std::int64_t window_start = 0;
    std::int64_t window_duration = 0;
    /// True when the stream ended before filling the window; the stored
    /// duration is then truncated to the observed extent.
    bool partial = false;

    std::size_t size() const { return events.size(); }
    bool empty() const { return events.empty(); }
};

/// Normalized per-window event-count histogram.
struct EventFrame {
    Image<float> pixels;             ///< intensities in [0, 1]
    std::int64_t timestamp = 0;      ///< midpoint of the source window, microseconds
    std::int64_t window_start = 0;
    std::int64_t window_duration = 0;
};

/// Splits a sorted stream into consecutive, non-overlapping windows of width
/// tau_us anchored at the first event's timestamp (or at window_anchor when
/// given, which must not exceed the first timestamp). Every event lands in
/// exactly one batch; gaps produce empty batches so window indices stay
/// contiguous. A trailing window the stream does not fill is flagged partial
/// with its duration truncated.
std::vector<EventBatch> batch_events(const EventStream& stream, std::int64_t tau_us,
                                     std::optional<std::int64_t> window_anchor = std::nullopt);

/// Event-to-frame conversion: 2D histogram of event coordinates (polarity
/// ignored), divided by the per-frame maximum count. Empty batches give an
/// all-zero frame; non-empty frames attain 1.0 exactly at the peak.
EventFrame events_to_frame(const EventBatch& batch, const SensorGeometry& geometry);

}  // namespace evsat
