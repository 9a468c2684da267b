#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gbr/image.hpp"

namespace gbr {

// Analytic scenes: one textured background plane plus axis-aligned
// rectangles at smaller depths. Cameras translate in +x with step delta,
// so content shifts right from view to view and new pixels enter at the
// left edge. All geometry is horizontal-parallax only.

/// Foreground rectangle. Flat rects keep an exact per-step disparity in
/// half-pixel units (disp2_*); slanted rects interpolate depth linearly
/// per texel column and derive disparity from it.
struct Rect {
    int x0 = 0, y0 = 0;  // view-1 position, 0-based
    int w = 0, h = 0;
    double depth_left = 0.0;   // scene units at texel column 0
    double depth_right = 0.0;  // scene units at texel column w-1
    int disp2_left = -1;       // 2x disparity per step when exact, else -1
    int disp2_right = -1;
    std::vector<uint8_t> texture;  // w*h luminance texels

    bool slanted() const { return depth_left != depth_right; }
    uint8_t texel(int tr, int tc) const { return texture[static_cast<size_t>(tr) * w + tc]; }
};

struct Scene {
    int width = 0, height = 0;
    int num_views = 0;
    double focal_f = 0.0;        // pixels
    double baseline_delta = 0.0; // scene units per camera step
    int z_scale = 256;           // depth channel quantizer (units per scene unit)

    double background_depth = 0.0;
    int background_disp2 = 2;  // background disparity in half-pixel units (always even)
    std::vector<uint8_t> background_texture;  // height x (width + margin) texels
    int background_margin = 0;                // texel index offset for appearing content

    std::vector<Rect> rects;

    double fdelta() const { return focal_f * baseline_delta; }
    /// Background texel for view-1 column j (j may be negative: content
    /// left of the view-1 frame that appears in later views).
    uint8_t background_texel(int r, int j) const {
        return background_texture[static_cast<size_t>(r) * (width + background_margin) +
                                  (j + background_margin)];
    }
};

struct SceneOptions {
    int num_rects = 5;
    bool allow_overlap = false;  // stress mode: skip the non-overlap rejection
    int width = 190;
    int height = 190;
};

Scene gen_squares1(uint64_t seed, int num_views, const SceneOptions& opt = {});
Scene gen_squares2(uint64_t seed, int num_views, const SceneOptions& opt = {});
Scene gen_squares3(uint64_t seed, int num_views, const SceneOptions& opt = {});

/// Renders one view (1-based index) with its depth channel. Composition
/// is exact for half-pixel-aligned geometry: each pixel is resolved from
/// two half-cell samples, a boundary pixel shared between two surfaces
/// becomes the rounded average of both.
ViewPair render_view(const Scene& scene, int view_index);

/// Per-step disparity of the rect at texel column tc, in pixels.
double rect_disparity(const Scene& scene, const Rect& rect, int tc);

// Dataset directory layout: view_%02d.pgm (8-bit), depth_%02d.pgm
// (16-bit) and a scene.json sidecar carrying f, delta, z_scale, num_views.

struct Dataset {
    std::vector<Image8> views;
    std::vector<Depth16> depths;
    double f = 0.0;
    double delta = 0.0;
    int z_scale = 256;
};

Dataset render_dataset(const Scene& scene);
void write_dataset(const std::string& dir, const Dataset& ds);
Dataset read_dataset(const std::string& dir);

}  // namespace gbr
