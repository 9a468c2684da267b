#pragma once

#include <cstdint>
#include <vector>

#include "gbr/image.hpp"

namespace gbr {

// The multi-level graph representation. Level 0 is the dense reference
// view; each higher level stores only the pixels of its view that cannot
// be reached from the level below (appearing and disoccluded content).
// Connections live one level below the view they explain:
//
//   lambda(l, r, c) = v, with d the traversal offset at column c:
//     v == d + 1  disocclusion link: stored pixels of level l+1 follow,
//                 the linked neighbor is this column;
//     v == d      at the last pre-jump column: occlusion jump, paired
//                 with a second entry v2 at column c2; the anchors may
//                 leave a forward gap of (c2+v2)-(c+v) >= 0 stored
//                 pixels between the jumped targets;
//                 at the last consumed column of a row: disappearing
//                 marker, v = number of columns that leave the frame.
//   v == 0 means no connection. The top level carries none.

class GbrGraph {
public:
    GbrGraph() = default;
    GbrGraph(int width, int height, int levels);

    int width() const { return width_; }
    int height() const { return height_; }
    int levels() const { return levels_; }

    /// 1-based source view index per level (level_view_indices[0] == 1).
    std::vector<int> level_view_indices;
    double focal = 0.0;
    double step_delta = 0.0;

    uint8_t gamma(int level, int r, int c) const { return gamma_[idx(level, r, c)]; }
    bool has_gamma(int level, int r, int c) const { return gamma_set_[idx(level, r, c)] != 0; }
    void set_gamma(int level, int r, int c, uint8_t v) {
        gamma_[idx(level, r, c)] = v;
        gamma_set_[idx(level, r, c)] = 1;
    }
    void clear_gamma_level(int level);

    uint16_t lambda(int level, int r, int c) const { return lambda_[idx(level, r, c)]; }
    void set_lambda(int level, int r, int c, uint16_t v) { lambda_[idx(level, r, c)] = v; }
    const uint16_t* lambda_row(int level, int r) const {
        return lambda_.data() + idx(level, r, 0);
    }

    /// Number of non-zero connections across all levels (M).
    size_t connection_count() const;

    friend bool operator==(const GbrGraph& a, const GbrGraph& b) = default;

private:
    size_t idx(int level, int r, int c) const {
        return (static_cast<size_t>(level) * height_ + r) * width_ + c;
    }

    int width_ = 0, height_ = 0, levels_ = 0;
    std::vector<uint8_t> gamma_;
    std::vector<uint8_t> gamma_set_;
    std::vector<uint16_t> lambda_;
};

/// Sparse list of every non-zero connection, sorted by (level, row, col).
struct ConnectionEntry {
    int32_t row = 0;
    int32_t col = 0;
    int32_t level = 0;  // 0-based level holding the connection
    int32_t value = 0;

    friend bool operator==(const ConnectionEntry&, const ConnectionEntry&) = default;
};

struct ConnectionTable {
    std::vector<ConnectionEntry> entries;

    friend bool operator==(const ConnectionTable&, const ConnectionTable&) = default;
};

/// d = round-half-up of f*delta/z per pixel. Depth arrives in raw
/// z_scale units; a zero raw value is rejected.
DisparityMap depth_to_disparity(const Depth16& depth, double f, double delta, int z_scale = 256);

/// Two-level construction from the reference view, the next view, and
/// the reference's dense disparity. Scans each row left to right: the
/// first D(r,0) pixels of the next view are stored as appearing, a
/// disparity increase stores the revealed pixels and links them to the
/// last background column, a decrease writes an occlusion jump pair, and
/// the columns that slide past the right border get a disappearing
/// marker at the last consumed column.
GbrGraph build_two_level(const Image8& ref, const Image8& next, const DisparityMap& disp);

/// N-level construction; each level is built from the previous included
/// view, with disparity recomputed from that view's depth over the
/// composed baseline (view_indices[l] - view_indices[l-1] steps).
GbrGraph build_graph(const std::vector<Image8>& views, const std::vector<Depth16>& depths,
                     double f, double delta, const std::vector<int>& view_indices,
                     int z_scale = 256);

/// Drops an interior level from the graph alone: the two adjacent
/// construction steps are replayed over the reconstructed views with
/// their composed disparity. On integer-disparity scenes this equals the
/// graph built directly without that level.
GbrGraph remove_level(const GbrGraph& graph, int level);

ConnectionTable extract_table(const GbrGraph& graph);

/// Validates ordering and ranges, then fills a connections-only graph
/// (gamma left empty) of the given dimensions.
GbrGraph inject_table(const ConnectionTable& table, int width, int height, int levels);

}  // namespace gbr
