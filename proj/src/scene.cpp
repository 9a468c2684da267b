#include "gbr/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "gbr/pgm.hpp"

namespace gbr {

namespace {

constexpr double PRESET_F = 510.0;      // pixels
constexpr double PRESET_DELTA = 0.5;    // scene units per camera step
// PRESET_F * PRESET_DELTA = 255, so disparity d corresponds to depth 255/d.

uint8_t noise_texel(std::mt19937_64& rng, int mean, int amplitude) {
    int span = 2 * amplitude + 1;
    int v = mean - amplitude + static_cast<int>(rng() % span);
    return clamp_u8(v);
}

void fill_rect_texture(Rect& rect, std::mt19937_64& rng, int mean, int amplitude) {
    rect.texture.resize(static_cast<size_t>(rect.w) * rect.h);
    for (auto& t : rect.texture) t = noise_texel(rng, mean, amplitude);
}

bool overlaps(const Rect& a, const Rect& b) {
    // 1-pixel margin keeps adjacent surfaces separated in view 1.
    return a.x0 < b.x0 + b.w + 1 && b.x0 < a.x0 + a.w + 1 &&
           a.y0 < b.y0 + b.h + 1 && b.y0 < a.y0 + a.h + 1;
}

int rect_mean(int index, int count) {
    if (count <= 1) return 150;
    return 110 + index * 120 / (count - 1);
}

Scene scene_shell(uint64_t seed, int num_views, const SceneOptions& opt, uint64_t variant) {
    if (num_views < 2) throw InputError("scene generation requires num_views >= 2");
    if (opt.num_rects < 0) throw InputError("num_rects must be >= 0");
    Scene s;
    s.width = opt.width;
    s.height = opt.height;
    s.num_views = num_views;
    s.focal_f = PRESET_F;
    s.baseline_delta = PRESET_DELTA;
    s.background_disp2 = 2;
    s.background_depth = s.fdelta() / (s.background_disp2 * 0.5);
    s.background_margin = (num_views - 1) * (s.background_disp2 / 2);

    std::mt19937_64 rng(seed * 2654435761u + variant);
    s.background_texture.resize(static_cast<size_t>(s.height) * (s.width + s.background_margin));
    for (auto& t : s.background_texture) t = noise_texel(rng, 60, 12);

    for (int k = 0; k < opt.num_rects; ++k) {
        Rect r;
        bool placed = false;
        for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
            r.w = 20 + static_cast<int>(rng() % 37);
            r.h = 20 + static_cast<int>(rng() % 37);
            if (r.w >= s.width || r.h >= s.height) continue;
            r.x0 = static_cast<int>(rng() % (s.width - r.w));
            r.y0 = static_cast<int>(rng() % (s.height - r.h));
            placed = opt.allow_overlap ||
                     std::none_of(s.rects.begin(), s.rects.end(),
                                  [&](const Rect& q) { return overlaps(r, q); });
        }
        if (!placed)
            throw InputError("scene generation: rectangle placement budget exceeded");
        fill_rect_texture(r, rng, rect_mean(k, opt.num_rects), 2);
        s.rects.push_back(std::move(r));
    }
    return s;
}

void set_flat_disparity(Scene& s, Rect& r, int disp2) {
    r.disp2_left = r.disp2_right = disp2;
    r.depth_left = r.depth_right = s.fdelta() / (disp2 * 0.5);
}

}  // namespace

Scene gen_squares1(uint64_t seed, int num_views, const SceneOptions& opt) {
    Scene s = scene_shell(seed, num_views, opt, 0x5153'0001);
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 1);
    for (auto& r : s.rects) {
        int d = 2 + static_cast<int>(rng() % 7);  // integer disparity in [2, 8]
        set_flat_disparity(s, r, 2 * d);
    }
    return s;
}

Scene gen_squares2(uint64_t seed, int num_views, const SceneOptions& opt) {
    Scene s = scene_shell(seed, num_views, opt, 0x5153'0002);
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 2);
    bool any_half = false;
    for (auto& r : s.rects) {
        int d2 = 3 + static_cast<int>(rng() % 14);  // disparity in [1.5, 8] by halves
        set_flat_disparity(s, r, d2);
        any_half = any_half || (d2 % 2 != 0);
    }
    if (!s.rects.empty() && !any_half)
        set_flat_disparity(s, s.rects.front(), s.rects.front().disp2_left + 1);
    return s;
}

Scene gen_squares3(uint64_t seed, int num_views, const SceneOptions& opt) {
    Scene s = scene_shell(seed, num_views, opt, 0x5153'0003);
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 3);
    bool any_slant = false;
    for (size_t k = 0; k < s.rects.size(); ++k) {
        Rect& r = s.rects[k];
        double d_left = 2.0 + static_cast<double>(rng() % 7);
        // Slant cap keeps per-texel projections monotone for every view.
        double cap = 0.8 * (r.w - 1) / (4.0 * (num_views - 1));
        double slant = 0.5 + 0.5 * static_cast<double>(rng() % 3);
        slant = std::min(slant, cap);
        if (rng() % 2) slant = -slant;
        if (k == s.rects.size() - 1 && !any_slant)
            slant = std::max(std::min(cap, 0.25), std::abs(slant));
        double d_right = std::clamp(d_left + slant, 1.5, 9.0);
        r.depth_left = s.fdelta() / d_left;
        r.depth_right = s.fdelta() / d_right;
        if (r.depth_left == r.depth_right) {
            set_flat_disparity(s, r, static_cast<int>(2 * d_left));
        } else {
            r.disp2_left = r.disp2_right = -1;
            any_slant = true;
        }
    }
    return s;
}

double rect_disparity(const Scene& scene, const Rect& rect, int tc) {
    if (!rect.slanted()) return rect.disp2_left * 0.5;
    double t = rect.w > 1 ? static_cast<double>(tc) / (rect.w - 1) : 0.0;
    double z = rect.depth_left + t * (rect.depth_right - rect.depth_left);
    return scene.fdelta() / z;
}

namespace {

// Projected texel-center position of rect texel tc in view (1 + m).
double rect_texel_x(const Scene& s, const Rect& r, int m, int tc) {
    return r.x0 + tc + m * rect_disparity(s, r, tc);
}

// Continuous footprint of a rect row in one view: texel boundaries are
// midpoints between consecutive projected texel centers (edges
// extrapolated half a step outwards).
struct RectFootprint {
    const Rect* rect = nullptr;
    std::vector<double> edges;  // size w+1, strictly increasing

    bool covers(double p) const { return p >= edges.front() && p < edges.back(); }
    int texel_at(double p) const {
        auto it = std::upper_bound(edges.begin(), edges.end(), p);
        return static_cast<int>(it - edges.begin()) - 1;
    }
};

RectFootprint footprint(const Scene& s, const Rect& r, int m) {
    RectFootprint fp;
    fp.rect = &r;
    fp.edges.resize(r.w + 1);
    if (!r.slanted()) {
        double shift = m * (r.disp2_left * 0.5);
        for (int j = 0; j <= r.w; ++j) fp.edges[j] = r.x0 - 0.5 + j + shift;
        return fp;
    }
    std::vector<double> centers(r.w);
    for (int j = 0; j < r.w; ++j) centers[j] = rect_texel_x(s, r, m, j);
    for (int j = 1; j < r.w; ++j) fp.edges[j] = 0.5 * (centers[j - 1] + centers[j]);
    fp.edges[0] = centers[0] - (fp.edges[1] - centers[0]);
    fp.edges[r.w] = centers[r.w - 1] + (centers[r.w - 1] - fp.edges[r.w - 1]);
    for (int j = 0; j < r.w; ++j)
        if (fp.edges[j + 1] <= fp.edges[j])
            throw InputError("scene: slanted rect projection is not monotone");
    return fp;
}

double rect_depth_at(const Rect& r, int tc) {
    if (!r.slanted()) return r.depth_left;
    double t = r.w > 1 ? static_cast<double>(tc) / (r.w - 1) : 0.0;
    return r.depth_left + t * (r.depth_right - r.depth_left);
}

struct SampleHit {
    double depth;
    uint8_t value;
};

}  // namespace

ViewPair render_view(const Scene& scene, int view_index) {
    if (view_index < 1 || view_index > scene.num_views)
        throw InputError("render_view: view index out of range");
    const int m = view_index - 1;
    const int W = scene.width, H = scene.height;
    ViewPair out{Image8(W, H), Depth16(W, H)};

    std::vector<RectFootprint> fps;
    fps.reserve(scene.rects.size());
    for (const Rect& r : scene.rects) fps.push_back(footprint(scene, r, m));

    const double bg_shift = m * (scene.background_disp2 * 0.5);

    for (int r = 0; r < H; ++r) {
        auto resolve = [&](double p) -> SampleHit {
            SampleHit best{scene.background_depth,
                           scene.background_texel(
                               r, static_cast<int>(std::floor(p - bg_shift + 0.5)))};
            for (const auto& fp : fps) {
                const Rect& rect = *fp.rect;
                if (r < rect.y0 || r >= rect.y0 + rect.h) continue;
                if (!fp.covers(p)) continue;
                int tc = fp.texel_at(p);
                double z = rect_depth_at(rect, tc);
                if (z < best.depth) best = {z, rect.texel(r - rect.y0, tc)};
            }
            return best;
        };
        for (int c = 0; c < W; ++c) {
            SampleHit left = resolve(c - 0.25);
            SampleHit right = resolve(c + 0.25);
            out.image.at(r, c) = static_cast<uint8_t>((left.value + right.value + 1) / 2);
            SampleHit center = resolve(static_cast<double>(c));
            double raw = std::floor(center.depth * scene.z_scale + 0.5);
            out.depth.at(r, c) =
                static_cast<uint16_t>(std::clamp(raw, 1.0, 65535.0));
        }
    }
    return out;
}

Dataset render_dataset(const Scene& scene) {
    Dataset ds;
    ds.f = scene.focal_f;
    ds.delta = scene.baseline_delta;
    ds.z_scale = scene.z_scale;
    for (int n = 1; n <= scene.num_views; ++n) {
        ViewPair vp = render_view(scene, n);
        ds.views.push_back(std::move(vp.image));
        ds.depths.push_back(std::move(vp.depth));
    }
    return ds;
}

namespace {

std::string numbered(const std::string& dir, const char* stem, int index1) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%02d.pgm", stem, index1);
    return (std::filesystem::path(dir) / buf).string();
}

}  // namespace

void write_dataset(const std::string& dir, const Dataset& ds) {
    std::filesystem::create_directories(dir);
    for (size_t i = 0; i < ds.views.size(); ++i) {
        write_pgm8(numbered(dir, "view", static_cast<int>(i) + 1), ds.views[i]);
        write_pgm16(numbered(dir, "depth", static_cast<int>(i) + 1), ds.depths[i]);
    }
    nlohmann::json j;
    j["f"] = ds.f;
    j["delta"] = ds.delta;
    j["z_scale"] = ds.z_scale;
    j["num_views"] = ds.views.size();
    std::ofstream out(std::filesystem::path(dir) / "scene.json");
    out << j.dump(2) << "\n";
    if (!out) throw FormatError(dir + ": cannot write scene.json");
}

Dataset read_dataset(const std::string& dir) {
    std::ifstream in(std::filesystem::path(dir) / "scene.json");
    if (!in) throw FormatError(dir + ": missing scene.json");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(dir + ": bad scene.json: " + e.what());
    }
    Dataset ds;
    try {
        ds.f = j.at("f").get<double>();
        ds.delta = j.at("delta").get<double>();
        ds.z_scale = j.at("z_scale").get<int>();
        int n = j.at("num_views").get<int>();
        for (int i = 1; i <= n; ++i) {
            ds.views.push_back(read_pgm8(numbered(dir, "view", i)));
            ds.depths.push_back(read_pgm16(numbered(dir, "depth", i)));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(dir + ": bad scene.json: " + e.what());
    }
    for (size_t i = 1; i < ds.views.size(); ++i)
        if (!ds.views[i].same_size(ds.views[0]) || !ds.depths[i].same_size(ds.views[0]))
            throw FormatError(dir + ": inconsistent image dimensions");
    return ds;
}

}  // namespace gbr
