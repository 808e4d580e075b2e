#include "evsat/render.hpp"

#include <algorithm>
#include <cmath>

namespace evsat {

namespace {

constexpr double kNearPlane = 1e-6;  // meters

void plot(Image<float>& img, int x, int y, double coverage) {
    if (!img.contains(x, y)) {
        return;
    }
    const float v = kRenderBackground + static_cast<float>(coverage) * (kRenderLine - kRenderBackground);
    float& px = img.at(y, x);
    px = std::max(px, v);
}

// Liang-Barsky clip of a segment against a slightly padded image rectangle.
// Keeps rasterization bounded when a near-plane endpoint projects far away.
bool clip_to_rect(double& x0, double& y0, double& x1, double& y1, double w, double h) {
    const double xmin = -1.0, ymin = -1.0, xmax = w, ymax = h;
    double t0 = 0.0, t1 = 1.0;
    const double dx = x1 - x0, dy = y1 - y0;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {x0 - xmin, xmax - x0, y0 - ymin, ymax - y0};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return false;
            continue;
        }
        const double r = q[i] / p[i];
        if (p[i] < 0.0) {
            if (r > t1) return false;
            t0 = std::max(t0, r);
        } else {
            if (r < t0) return false;
            t1 = std::min(t1, r);
        }
    }
    const double nx0 = x0 + t0 * dx, ny0 = y0 + t0 * dy;
    const double nx1 = x0 + t1 * dx, ny1 = y0 + t1 * dy;
    x0 = nx0;
    y0 = ny0;
    x1 = nx1;
    y1 = ny1;
    return true;
}

double fpart(double v) { return v - std::floor(v); }
double rfpart(double v) { return 1.0 - fpart(v); }

// Xiaolin Wu anti-aliased line.
void draw_line_aa(Image<float>& img, double x0, double y0, double x1, double y1) {
    if (!clip_to_rect(x0, y0, x1, y1, img.width, img.height)) {
        return;
    }
    const bool steep = std::abs(y1 - y0) > std::abs(x1 - x0);
    if (steep) {
        std::swap(x0, y0);
        std::swap(x1, y1);
    }
    if (x0 > x1) {
        std::swap(x0, x1);
        std::swap(y0, y1);
    }
    const double dx = x1 - x0;
    const double gradient = dx == 0.0 ? 1.0 : (y1 - y0) / dx;

    auto plot_xy = [&](int a, int b, double c) {
        if (steep) {
            plot(img, b, a, c);
        } else {
            plot(img, a, b, c);
        }
    };

    // first endpoint
    double xend = std::round(x0);
    double yend = y0 + gradient * (xend - x0);
    double xgap = rfpart(x0 + 0.5);
    const int xpx1 = static_cast<int>(xend);
    const int ypx1 = static_cast<int>(std::floor(yend));
    plot_xy(xpx1, ypx1, rfpart(yend) * xgap);
    plot_xy(xpx1, ypx1 + 1, fpart(yend) * xgap);
    double intery = yend + gradient;

    // second endpoint
    xend = std::round(x1);
    yend = y1 + gradient * (xend - x1);
    xgap = fpart(x1 + 0.5);
    const int xpx2 = static_cast<int>(xend);
    const int ypx2 = static_cast<int>(std::floor(yend));
    plot_xy(xpx2, ypx2, rfpart(yend) * xgap);
    plot_xy(xpx2, ypx2 + 1, fpart(yend) * xgap);

    for (int x = xpx1 + 1; x < xpx2; ++x) {
        plot_xy(x, static_cast<int>(std::floor(intery)), rfpart(intery));
        plot_xy(x, static_cast<int>(std::floor(intery)) + 1, fpart(intery));
        intery += gradient;
    }
}

}  // namespace

LandmarkSet WireframeModel::landmarks() const {
    LandmarkSet set;
    set.points.reserve(landmark_indices.size());
    for (int idx : landmark_indices) {
        set.points.push_back(vertices[static_cast<std::size_t>(idx)]);
    }
    return set;
}

IntensityFrame render_wireframe(const WireframeModel& model, const Pose& pose,
                                const CameraIntrinsics& intrinsics,
                                const SensorGeometry& geometry) {
    IntensityFrame frame;
    frame.pixels = Image<float>(geometry.width, geometry.height, kRenderBackground);

    for (const auto& [ia, ib] : model.edges) {
        Eigen::Vector3d a = pose.apply(model.vertices[static_cast<std::size_t>(ia)]);
        Eigen::Vector3d b = pose.apply(model.vertices[static_cast<std::size_t>(ib)]);
        if (a.z() < kNearPlane && b.z() < kNearPlane) {
            continue;
        }
        if (a.z() < kNearPlane) {
            const double s = (kNearPlane - a.z()) / (b.z() - a.z());
            a = a + s * (b - a);
        } else if (b.z() < kNearPlane) {
            const double s = (kNearPlane - b.z()) / (a.z() - b.z());
            b = b + s * (a - b);
        }
        const Eigen::Vector2d pa = project_camera_point(intrinsics, a);
        const Eigen::Vector2d pb = project_camera_point(intrinsics, b);
        draw_line_aa(frame.pixels, pa.x(), pa.y(), pb.x(), pb.y());
    }
    return frame;
}

WireframeModel make_reference_satellite() {
    WireframeModel m;
    auto add_vertex = [&](double x, double y, double z) {
        m.vertices.emplace_back(x, y, z);
        return static_cast<int>(m.vertices.size()) - 1;
    };
    auto add_edge = [&](int a, int b) { m.edges.emplace_back(a, b); };

    // Body: 0.25 x 0.25 x 0.5 m box, long axis along z.
    const double bx = 0.125, by = 0.125, bz = 0.25;
    int body[8];
    int k = 0;
    for (int sz : {-1, 1}) {
        for (int sy : {-1, 1}) {
            for (int sx : {-1, 1}) {
                body[k++] = add_vertex(sx * bx, sy * by, sz * bz);
            }
        }
    }
    // 12 box edges
    add_edge(body[0], body[1]);
    add_edge(body[2], body[3]);
    add_edge(body[0], body[2]);
    add_edge(body[1], body[3]);
    add_edge(body[4], body[5]);
    add_edge(body[6], body[7]);
    add_edge(body[4], body[6]);
    add_edge(body[5], body[7]);
    for (int i = 0; i < 4; ++i) {
        add_edge(body[i], body[i + 4]);
    }

    // Solar panels in the x-z plane on both sides of the body.
    const double panel_inner = 0.165, panel_outer = 0.385, panel_half_h = 0.18;
    std::vector<int> panel_corners;
    for (int side : {-1, 1}) {
        const double xi = side * panel_inner;
        const double xo = side * panel_outer;
        const int c0 = add_vertex(xi, 0.0, -panel_half_h);
        const int c1 = add_vertex(xo, 0.0, -panel_half_h);
        const int c2 = add_vertex(xo, 0.0, panel_half_h);
        const int c3 = add_vertex(xi, 0.0, panel_half_h);
        add_edge(c0, c1);
        add_edge(c1, c2);
        add_edge(c2, c3);
        add_edge(c3, c0);
        panel_corners.insert(panel_corners.end(), {c0, c1, c2, c3});
        // mid rib and mounting strut
        const int m0 = add_vertex(xi, 0.0, 0.0);
        const int m1 = add_vertex(xo, 0.0, 0.0);
        add_edge(m0, m1);
        const int hub = add_vertex(side * bx, 0.0, 0.0);
        add_edge(hub, m0);
    }

    // Dish: octagonal ring on a short mast above the body.
    const double ring_r = 0.09, ring_z = 0.30;
    const int mast_base = add_vertex(0.0, 0.0, bz);
    const int ring_center = add_vertex(0.0, 0.0, ring_z);
    add_edge(mast_base, ring_center);
    std::vector<int> ring;
    for (int i = 0; i < 8; ++i) {
        const double a = 2.0 * M_PI * i / 8.0;
        ring.push_back(add_vertex(ring_r * std::cos(a), ring_r * std::sin(a), ring_z));
    }
    for (int i = 0; i < 8; ++i) {
        add_edge(ring[static_cast<std::size_t>(i)], ring[static_cast<std::size_t>((i + 1) % 8)]);
        add_edge(ring_center, ring[static_cast<std::size_t>(i)]);
    }

    // 24 landmarks: body corners, panel corners, dish ring.
    for (int i = 0; i < 8; ++i) {
        m.landmark_indices.push_back(body[i]);
    }
    for (int idx : panel_corners) {
        m.landmark_indices.push_back(idx);
    }
    for (int idx : ring) {
        m.landmark_indices.push_back(idx);
    }
    return m;
}

}  // namespace evsat
