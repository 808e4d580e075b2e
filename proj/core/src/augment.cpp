#include "evsat/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "evsat/errors.hpp"

namespace evsat {

namespace {

void check_config(const AugmentConfig& cfg) {
    if (cfg.noise_density < 0.0 || cfg.noise_density > 1.0) {
        throw ParameterError("augment: noise_density must lie in [0, 1]");
    }
    if (cfg.noise_intensity_range[0] > cfg.noise_intensity_range[1] ||
        cfg.noise_intensity_range[0] < 0.0 || cfg.noise_intensity_range[1] > 1.0) {
        throw ParameterError("augment: noise_intensity_range must be ordered within [0, 1]");
    }
    if (cfg.line_count_range[0] > cfg.line_count_range[1] || cfg.line_count_range[0] < 0) {
        throw ParameterError("augment: line_count_range must be ordered and non-negative");
    }
}

// Uniform point on the image border, expressed as a position along the
// unwrapped perimeter.
Eigen::Vector2d random_border_point(int width, int height, Rng& rng) {
    const std::int64_t w = width, h = height;
    const std::int64_t perimeter = 2 * (w + h) - 4;
    std::int64_t pos = rng.uniform_int(0, perimeter - 1);
    if (pos < w) {
        return {static_cast<double>(pos), 0.0};
    }
    pos -= w;
    if (pos < h - 1) {
        return {static_cast<double>(w - 1), static_cast<double>(pos + 1)};
    }
    pos -= h - 1;
    if (pos < w - 1) {
        return {static_cast<double>(w - 2 - pos), static_cast<double>(h - 1)};
    }
    pos -= w - 1;
    return {0.0, static_cast<double>(h - 1 - pos)};
}

}  // namespace

void rasterize_segment(Image<float>& image, int x0, int y0, int x1, int y1, float intensity) {
    const int dx = std::abs(x1 - x0);
    const int dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1;
    const int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    int x = x0, y = y0;
    while (true) {
        if (image.contains(x, y)) {
            image.at(y, x) = std::max(image.at(y, x), intensity);
        }
        if (x == x1 && y == y1) {
            break;
        }
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
}

EventFrame random_event_noise(const EventFrame& frame, const AugmentConfig& cfg, Rng& rng) {
    check_config(cfg);
    EventFrame out = frame;
    const std::size_t n_px = out.pixels.pixel_count();
    const auto n_hit = static_cast<std::size_t>(
        std::llround(cfg.noise_density * static_cast<double>(n_px)));
    if (n_hit == 0) {
        return out;
    }
    // partial Fisher-Yates: first n_hit entries are a uniform sample without
    // replacement
    std::vector<std::uint32_t> indices(n_px);
    std::iota(indices.begin(), indices.end(), 0u);
    for (std::size_t i = 0; i < n_hit; ++i) {
        const auto j = static_cast<std::size_t>(
            rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n_px) - 1));
        std::swap(indices[i], indices[j]);
        const double v = rng.uniform(cfg.noise_intensity_range[0], cfg.noise_intensity_range[1]);
        out.pixels.data[indices[i]] = static_cast<float>(v);
    }
    return out;
}

EventFrame random_event_lines(const EventFrame& frame, const AugmentConfig& cfg, Rng& rng) {
    check_config(cfg);
    EventFrame out = frame;
    const auto count = rng.uniform_int(cfg.line_count_range[0], cfg.line_count_range[1]);
    for (std::int64_t i = 0; i < count; ++i) {
        const Eigen::Vector2d a = random_border_point(out.pixels.width, out.pixels.height, rng);
        const Eigen::Vector2d b = random_border_point(out.pixels.width, out.pixels.height, rng);
        rasterize_segment(out.pixels, static_cast<int>(a.x()), static_cast<int>(a.y()),
                          static_cast<int>(b.x()), static_cast<int>(b.y()),
                          static_cast<float>(cfg.line_intensity));
    }
    return out;
}

std::pair<EventFrame, GroundTruthRecord> rigid_augment(const EventFrame& frame,
                                                       const GroundTruthRecord& labels,
                                                       double theta_deg, double dx, double dy) {
    const double theta = theta_deg * std::numbers::pi / 180.0;
    const double c = std::cos(theta), s = std::sin(theta);

    const int width = frame.pixels.width, height = frame.pixels.height;
    const Eigen::Vector2d center{width / 2.0, height / 2.0};
    const Eigen::Vector2d shift{dx, dy};

    auto forward = [&](const Eigen::Vector2d& p) -> Eigen::Vector2d {
        const Eigen::Vector2d q = p - center;
        return {c * q.x() - s * q.y() + center.x() + shift.x(),
                s * q.x() + c * q.y() + center.y() + shift.y()};
    };

    EventFrame out = frame;
    std::fill(out.pixels.data.begin(), out.pixels.data.end(), 0.0f);
    // inverse map with bilinear sampling; outside reads as 0
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double qx = x - center.x() - shift.x();
            const double qy = y - center.y() - shift.y();
            const double sx = c * qx + s * qy + center.x();
            const double sy = -s * qx + c * qy + center.y();
            const int x0 = static_cast<int>(std::floor(sx));
            const int y0 = static_cast<int>(std::floor(sy));
            const double fx = sx - x0, fy = sy - y0;
            auto sample = [&](int xi, int yi) -> double {
                return frame.pixels.contains(xi, yi) ? frame.pixels.at(yi, xi) : 0.0;
            };
            const double v = (1 - fx) * (1 - fy) * sample(x0, y0) + fx * (1 - fy) * sample(x0 + 1, y0) +
                             (1 - fx) * fy * sample(x0, y0 + 1) + fx * fy * sample(x0 + 1, y0 + 1);
            out.pixels.at(y, x) = static_cast<float>(v);
        }
    }

    GroundTruthRecord new_labels = labels;
    for (auto& lm : new_labels.landmarks2d) {
        if (!lm.visible) {
            continue;
        }
        lm.uv = forward(lm.uv);
        lm.visible = lm.uv.x() >= 0.0 && lm.uv.x() < width && lm.uv.y() >= 0.0 && lm.uv.y() < height;
    }
    if (new_labels.visible_count() < 4) {
        new_labels.degenerate = true;
    } else {
        try {
            new_labels.bbox = bbox_from_landmarks(new_labels.visible_points(), 0.10);
            new_labels.degenerate = false;
        } catch (const DegeneracyError&) {
            new_labels.degenerate = true;
        }
    }
    return {std::move(out), std::move(new_labels)};
}

std::pair<EventFrame, GroundTruthRecord> random_rigid_augment(const EventFrame& frame,
                                                              const GroundTruthRecord& labels,
                                                              const AugmentConfig& cfg, Rng& rng) {
    check_config(cfg);
    const double theta_deg = rng.uniform(-cfg.rotation_range_deg, cfg.rotation_range_deg);
    const double dx = rng.uniform(-cfg.translation_range_px, cfg.translation_range_px);
    const double dy = rng.uniform(-cfg.translation_range_px, cfg.translation_range_px);
    return rigid_augment(frame, labels, theta_deg, dx, dy);
}

}  // namespace evsat
