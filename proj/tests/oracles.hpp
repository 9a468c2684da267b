// Test-only reference implementations, kept independent of the library
// code paths they check.
#pragma once

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "gbr/scene.hpp"

namespace oracle {

// Forward z-buffer warp of one row: each source column lands at
// c + d(c), nearer (larger) disparity wins, leftmost source keeps ties.
// Unwritten targets are holes (source index -1).
struct WarpedRow {
    std::vector<int> source;  // target col -> source col or -1
};

inline WarpedRow warp_row(const std::vector<int>& disp) {
    const int W = static_cast<int>(disp.size());
    WarpedRow out;
    out.source.assign(W, -1);
    for (int c = 0; c < W; ++c) {
        int t = c + disp[c];
        if (t < 0 || t >= W) continue;
        if (out.source[t] < 0 || disp[c] > disp[out.source[t]]) out.source[t] = c;
    }
    return out;
}

// Builds a test scene directly from explicit flat rectangles (integer or
// half-integer disparities in half-pixel units).
struct RectSpec {
    int x0, y0, w, h;
    int disp2;  // 2x per-step disparity
};

inline gbr::Scene make_scene(uint64_t seed, int width, int height, int num_views,
                             const std::vector<RectSpec>& rects, int bg_disp2 = 2) {
    gbr::Scene s;
    s.width = width;
    s.height = height;
    s.num_views = num_views;
    s.focal_f = 510.0;
    s.baseline_delta = 0.5;
    s.background_disp2 = bg_disp2;
    s.background_depth = s.fdelta() / (bg_disp2 * 0.5);
    s.background_margin = (num_views - 1) * (bg_disp2 / 2);
    std::mt19937_64 rng(seed);
    s.background_texture.resize(static_cast<size_t>(height) * (width + s.background_margin));
    for (auto& t : s.background_texture) t = static_cast<uint8_t>(40 + rng() % 41);
    int k = 0;
    for (const auto& rs : rects) {
        gbr::Rect r;
        r.x0 = rs.x0;
        r.y0 = rs.y0;
        r.w = rs.w;
        r.h = rs.h;
        r.disp2_left = r.disp2_right = rs.disp2;
        r.depth_left = r.depth_right = s.fdelta() / (rs.disp2 * 0.5);
        r.texture.resize(static_cast<size_t>(rs.w) * rs.h);
        int mean = 120 + 25 * (k++ % 5);
        for (auto& t : r.texture) t = static_cast<uint8_t>(mean - 2 + rng() % 5);
        s.rects.push_back(std::move(r));
    }
    return s;
}

// Random single-row integer-disparity scene with up to max_rects
// non-overlapping flat rects. Objects are kept wider than any disparity
// difference (no surface overtakes another between adjacent views), the
// regime the representation targets.
inline gbr::Scene random_row_scene(std::mt19937_64& rng, int max_rects, int width = 56) {
    int n = static_cast<int>(rng() % (max_rects + 1));
    std::vector<RectSpec> rects;
    for (int attempt = 0; attempt < 200 && static_cast<int>(rects.size()) < n; ++attempt) {
        RectSpec rs{};
        rs.w = 8 + static_cast<int>(rng() % 7);
        rs.x0 = static_cast<int>(rng() % (width - rs.w));
        rs.y0 = 0;
        rs.h = 1;
        rs.disp2 = 2 * (2 + static_cast<int>(rng() % 5));  // d in [2, 6]
        bool ok = true;
        for (const auto& q : rects)
            if (rs.x0 < q.x0 + q.w + 1 && q.x0 < rs.x0 + rs.w + 1) ok = false;
        if (ok) rects.push_back(rs);
    }
    return make_scene(rng(), width, 1, 2, rects);
}

inline double mse(const gbr::Image8& a, const gbr::Image8& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.data().size(); ++i) {
        double d = static_cast<double>(a.data()[i]) - b.data()[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.data().size());
}

inline double entropy_bits(const std::vector<int>& values) {
    if (values.empty()) return 0.0;
    std::map<int, size_t> hist;
    for (int v : values) ++hist[v];
    double h = 0.0;
    for (auto& [v, n] : hist) {
        double p = static_cast<double>(n) / values.size();
        h -= p * std::log2(p);
    }
    return h;
}

// Least-squares linear fit quality.
inline double r_squared(const std::vector<double>& xs, const std::vector<double>& ys) {
    const size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double beta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double alpha = (sy - beta * sx) / n;
    double ss_res = 0, ss_tot = 0, mean = sy / n;
    for (size_t i = 0; i < n; ++i) {
        double fit = alpha + beta * xs[i];
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - mean) * (ys[i] - mean);
    }
    return ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
}

}  // namespace oracle
