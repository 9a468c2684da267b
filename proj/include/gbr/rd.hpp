#pragma once

#include <string>
#include <vector>

#include "gbr/depth_baseline.hpp"
#include "gbr/pipeline.hpp"

namespace gbr {

// Full-search rate-distortion sweep over the quantizer ladders and graph
// level subsets, plus the upper-left convex envelope of the resulting
// point clouds.

/// 10*log10(255^2/MSE); identical images report the 99 dB sentinel.
double psnr(const Image8& a, const Image8& b);

struct RdPoint {
    std::string scheme;   // "gbr" or "depth"
    int config_id = 0;
    int64_t rate_bits = 0;
    double psnr_db = 0.0;  // mean over the N reconstructed views
    RateBreakdown breakdown;
    std::string config;   // human-readable descriptor, reproducible
};

struct GbrLadders {
    std::vector<std::vector<int>> level_subsets;  // each includes view 1 and N
    std::vector<int> q_refs;
    std::vector<int> q_res_values;
};

struct DepthLadders {
    std::vector<int> q_depths;
    std::vector<int> q_colors;
    std::vector<int> q_res_values;
};

GbrLadders default_gbr_ladders(int num_views);
DepthLadders default_depth_ladders();

/// Every subset of the interior views, always bracketed by 1 and N.
std::vector<std::vector<int>> all_level_subsets(int num_views);

std::vector<RdPoint> sweep_gbr(const Dataset& ds, const GbrLadders& ladders);
std::vector<RdPoint> sweep_depth(const Dataset& ds, const DepthLadders& ladders);

/// Upper-left convex envelope: strictly increasing rate and PSNR,
/// concave slopes.
std::vector<RdPoint> pareto_hull(const std::vector<RdPoint>& points);

/// Piecewise-linear PSNR of a hull at a given rate (clamped to range).
double hull_psnr_at(const std::vector<RdPoint>& hull, double rate_bits);

void write_points_csv(const std::string& path, const std::vector<RdPoint>& points);

}  // namespace gbr
