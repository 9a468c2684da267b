#pragma once

#include "gbr/container.hpp"
#include "gbr/image.hpp"
#include "gbr/scene.hpp"

namespace gbr {

// Comparison scheme: an IPPPP chain where each view (color and depth) is
// predicted by disparity compensation from the previously reconstructed
// pair and corrected with coded residuals. The first view's depth is
// coded with the lossy block codec at q_depth; every later prediction
// runs on reconstructed data, so encoder and decoder never drift.

struct WarpedImage {
    Image8 image;
    Plane<uint8_t> holes;  // 1 where no source pixel landed (value left 0)
};

struct WarpedDepth {
    Depth16 depth;
    Plane<uint8_t> holes;
};

/// Forward warp: each source pixel lands at c + d, nearer (larger)
/// disparity wins conflicts, unwritten targets are flagged and left 0.
WarpedImage warp_forward(const Image8& image, const DisparityMap& disp);
WarpedDepth warp_forward_depth(const Depth16& depth, const DisparityMap& disp);

struct DepthBaselineConfig {
    int q_depth = 1;  // first depth map and all depth residuals
    int q_color = 0;  // first color image (0 = lossless predictive)
    int q_res = 1;    // color residuals
};

Container ipppp_encode(const Dataset& ds, const DepthBaselineConfig& cfg,
                       std::vector<Image8>* recon_out = nullptr);
std::vector<Image8> ipppp_decode(const Container& c);

}  // namespace gbr
