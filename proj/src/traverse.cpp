#include "gbr/traverse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gbr {

namespace {

[[noreturn]] void protocol_error(const char* what, int row, int level) {
    throw IntegrityError(std::string("graph traversal: ") + what + " (row " +
                         std::to_string(row) + ", level " + std::to_string(level) + ")");
}

}  // namespace

void traverse_level_row(const uint16_t* lam, int width, int row, int level,
                        RowTraversalSink& sink) {
    const int W = width;
    int emitted = 0;

    const int appearing = sink.appearing_count(row);
    if (appearing < 0 || appearing > W) protocol_error("bad appearing count", row, level);
    for (int i = 0; i < appearing; ++i)
        sink.stored(row, emitted++, i, RunKind::Appearing, -1);
    if (emitted >= W) return;

    int base = 0;
    while (emitted < W) {
        if (base >= W) protocol_error("row underrun", row, level);
        sink.reference(row, base, emitted);
        const int d = emitted - base;
        ++emitted;
        if (emitted >= W) break;  // trailing disappearing marker is not navigated

        const int v = lam[base];
        if (v != 0) {
            if (v == d + 1) {
                // Disocclusion: stored run begins at the next output column.
                const int len = sink.run_length(row, base, emitted);
                if (len < 1 || emitted + len > W)
                    protocol_error("bad disocclusion run length", row, level);
                for (int i = 0; i < len; ++i)
                    sink.stored(row, emitted++, i, RunKind::Disoccluded, base);
                if (emitted >= W) break;
            } else if (v == d) {
                // Occlusion jump: the paired anchor names the resume
                // offset, and any forward gap between the two anchors'
                // targets is a stored run.
                int c2 = base + 1;
                while (c2 < W && lam[c2] == 0) ++c2;
                if (c2 >= W) protocol_error("unpaired occlusion jump", row, level);
                const int gap = (c2 + lam[c2]) - (base + v);
                if (gap < 0 || emitted + gap > W)
                    protocol_error("occlusion jump targets disagree", row, level);
                for (int i = 0; i < gap; ++i)
                    sink.stored(row, emitted++, i, RunKind::Disoccluded, base);
                base = c2;
            } else {
                protocol_error("connection value out of protocol", row, level);
            }
        }
        ++base;
    }
}

namespace {

// Presence-backed sink: run lengths come from the graph's own gamma
// mask, emissions are resolved against a dense base image.
class PresenceSink : public RowTraversalSink {
public:
    PresenceSink(const GbrGraph& g, int level, const Image8& base, Image8& out)
        : g_(g), level_(level), base_(base), out_(out) {}

    int appearing_count(int row) override {
        int c = 0;
        while (c < g_.width() && g_.has_gamma(level_, row, c)) ++c;
        return c;
    }
    int run_length(int row, int, int out_col) override {
        int c = out_col;
        while (c < g_.width() && g_.has_gamma(level_, row, c)) ++c;
        return c - out_col;
    }
    void stored(int row, int out_col, int, RunKind, int) override {
        if (!g_.has_gamma(level_, row, out_col))
            throw IntegrityError("graph traversal: stored pixel missing (row " +
                                 std::to_string(row) + ", level " + std::to_string(level_) + ")");
        out_.at(row, out_col) = g_.gamma(level_, row, out_col);
    }
    void reference(int row, int base_col, int out_col) override {
        out_.at(row, out_col) = base_.at(row, base_col);
    }

private:
    const GbrGraph& g_;
    int level_;
    const Image8& base_;
    Image8& out_;
};

}  // namespace

Image8 traverse_step(const GbrGraph& graph, int level, const Image8& base) {
    if (level < 1 || level >= graph.levels())
        throw InputError("traverse_step: level out of range");
    if (base.width() != graph.width() || base.height() != graph.height())
        throw InputError("traverse_step: base dimension mismatch");
    Image8 out(graph.width(), graph.height());
    PresenceSink sink(graph, level, base, out);
    for (int r = 0; r < graph.height(); ++r)
        traverse_level_row(graph.lambda_row(level - 1, r), graph.width(), r, level, sink);
    return out;
}

Image8 reconstruct_view(const GbrGraph& graph, int level) {
    if (level < 0 || level >= graph.levels())
        throw InputError("reconstruct_view: level out of range");
    Image8 img(graph.width(), graph.height());
    for (int r = 0; r < graph.height(); ++r)
        for (int c = 0; c < graph.width(); ++c) img.at(r, c) = graph.gamma(0, r, c);
    for (int l = 1; l <= level; ++l) img = traverse_step(graph, l, img);
    return img;
}

namespace {

// Records per-base-column offsets; columns never consumed stay at -1.
class OffsetSink : public RowTraversalSink {
public:
    OffsetSink(const GbrGraph& g, int level, DisparityMap& out)
        : g_(g), level_(level), out_(out) {}

    int appearing_count(int row) override {
        last_appearing_ = 0;
        int c = 0;
        while (c < g_.width() && g_.has_gamma(level_, row, c)) ++c;
        last_appearing_ = c;
        return c;
    }
    int run_length(int row, int, int out_col) override {
        int c = out_col;
        while (c < g_.width() && g_.has_gamma(level_, row, c)) ++c;
        return c - out_col;
    }
    void stored(int, int, int, RunKind, int) override {}
    void reference(int row, int base_col, int out_col) override {
        out_.at(row, base_col) = out_col - base_col;
    }

    int last_appearing() const { return last_appearing_; }

private:
    const GbrGraph& g_;
    int level_;
    DisparityMap& out_;
    int last_appearing_ = 0;
};

// Raw traversal offsets: consumed columns get out_col - base_col, all
// other columns stay at -1. appearing[r] records the stored prefix
// length of each row.
DisparityMap traversal_offsets(const GbrGraph& graph, int level, std::vector<int>& appearing) {
    if (level < 0 || level + 1 >= graph.levels())
        throw InputError("disparity_from_graph: level must be below the top level");
    DisparityMap out(graph.width(), graph.height(), -1);
    OffsetSink sink(graph, level + 1, out);
    appearing.resize(graph.height());
    for (int r = 0; r < graph.height(); ++r) {
        traverse_level_row(graph.lambda_row(level, r), graph.width(), r, level + 1, sink);
        appearing[r] = sink.last_appearing();
    }
    return out;
}

void fill_gaps(int32_t* row, int W, int32_t first_segment, bool backward_first) {
    if (backward_first) {
        int32_t next = -1;
        for (int c = W - 1; c >= 0; --c) {
            if (row[c] >= 0)
                next = row[c];
            else if (next >= 0)
                row[c] = next;
        }
    }
    int32_t last = first_segment;
    for (int c = 0; c < W; ++c) {
        if (row[c] < 0)
            row[c] = last;
        else
            last = row[c];
    }
}

DisparityMap recover_disparity(const GbrGraph& graph, int level, bool occlusion_fill) {
    std::vector<int> appearing;
    DisparityMap out = traversal_offsets(graph, level, appearing);
    for (int r = 0; r < graph.height(); ++r)
        fill_gaps(out.row(r), graph.width(), appearing[r], occlusion_fill);
    return out;
}

}  // namespace

DisparityMap disparity_from_graph(const GbrGraph& graph, int level) {
    return recover_disparity(graph, level, false);
}

DisparityMap disparity_from_graph_occlusion_filled(const GbrGraph& graph, int level) {
    return recover_disparity(graph, level, true);
}

namespace {

struct WarpTarget {
    int32_t best_disp = -1;
    uint8_t value = 0;
};

void forward_warp_row(const uint8_t* src, const int32_t* disp, int W, double scale, int sign,
                      std::vector<WarpTarget>& row) {
    for (int c = 0; c < W; ++c) {
        int shift = static_cast<int>(std::floor(scale * disp[c] + 0.5));
        int target = c + sign * shift;
        if (target < 0 || target >= W) continue;
        if (disp[c] > row[target].best_disp) {
            row[target].best_disp = disp[c];
            row[target].value = src[c];
        }
    }
}

}  // namespace

Image8 interpolate_view(const Image8& left, const DisparityMap& left_disp, const Image8& right,
                        const DisparityMap& right_disp, double t) {
    if (!(t > 0.0 && t < 1.0)) throw InputError("interpolate_view: t must be in (0, 1)");
    if (!left.same_size(right) || !left.same_size(left_disp) || !left.same_size(right_disp))
        throw InputError("interpolate_view: dimension mismatch");
    const int W = left.width(), H = left.height();
    Image8 out(W, H);
    std::vector<WarpTarget> from_left(W), from_right(W);
    for (int r = 0; r < H; ++r) {
        std::fill(from_left.begin(), from_left.end(), WarpTarget{});
        std::fill(from_right.begin(), from_right.end(), WarpTarget{});
        forward_warp_row(left.row(r), left_disp.row(r), W, t, +1, from_left);
        forward_warp_row(right.row(r), right_disp.row(r), W, 1.0 - t, -1, from_right);

        uint8_t* dst = out.row(r);
        std::vector<int> hole;
        for (int c = 0; c < W; ++c) {
            bool l = from_left[c].best_disp >= 0, rr = from_right[c].best_disp >= 0;
            if (l && rr)
                dst[c] = static_cast<uint8_t>((from_left[c].value + from_right[c].value + 1) / 2);
            else if (l)
                dst[c] = from_left[c].value;
            else if (rr)
                dst[c] = from_right[c].value;
            else
                hole.push_back(c);
        }
        // Nearest horizontal neighbor; ties prefer the left side.
        for (int c : hole) {
            int lc = c - 1, rc = c + 1;
            while (lc >= 0 && std::find(hole.begin(), hole.end(), lc) != hole.end()) --lc;
            while (rc < W && std::find(hole.begin(), hole.end(), rc) != hole.end()) ++rc;
            if (lc >= 0 && (rc >= W || c - lc <= rc - c))
                dst[c] = dst[lc];
            else if (rc < W)
                dst[c] = dst[rc];
            else
                dst[c] = 0;  // fully empty row
        }
    }
    return out;
}

DisparityMap warp_disparity_to_right(const DisparityMap& left_disp) {
    const int W = left_disp.width(), H = left_disp.height();
    DisparityMap out(W, H, -1);
    for (int r = 0; r < H; ++r) {
        const int32_t* src = left_disp.row(r);
        int32_t* dst = out.row(r);
        for (int c = 0; c < W; ++c) {
            int target = c + src[c];
            if (target < 0 || target >= W) continue;
            if (src[c] > dst[target]) dst[target] = src[c];
        }
        // Holes take the smaller neighboring disparity (background).
        for (int c = 0; c < W; ++c) {
            if (dst[c] >= 0) continue;
            int lc = c - 1, rc = c + 1;
            while (lc >= 0 && dst[lc] < 0) --lc;
            while (rc < W && dst[rc] < 0) ++rc;
            int32_t lv = lc >= 0 ? dst[lc] : -1, rv = rc < W ? dst[rc] : -1;
            if (lv >= 0 && rv >= 0)
                dst[c] = std::min(lv, rv);
            else
                dst[c] = std::max({lv, rv, 0});
        }
    }
    return out;
}

GbrGraph remove_level(const GbrGraph& graph, int level) {
    if (graph.levels() < 3)
        throw InputError("remove_level: graph has no removable level");
    if (level <= 0 || level >= graph.levels() - 1)
        throw InputError("remove_level: only interior levels can be removed");

    const int W = graph.width(), H = graph.height();
    Image8 below = reconstruct_view(graph, level - 1);
    Image8 mid = traverse_step(graph, level, below);
    Image8 above = traverse_step(graph, level + 1, mid);

    // Compose the two traversal offset maps. A column survives the pair
    // only if consumed in both steps; the rest (occluded or leaving the
    // frame) borrow the composed value that resumes to their right, so
    // the replayed construction sees the same transitions as a direct
    // build over the doubled baseline.
    std::vector<int> appearing_a, appearing_b;
    DisparityMap da = traversal_offsets(graph, level - 1, appearing_a);
    DisparityMap db = traversal_offsets(graph, level, appearing_b);
    DisparityMap composed(W, H, -1);
    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            int a = da.at(r, c);
            if (a < 0 || c + a >= W) continue;
            int b = db.at(r, c + a);
            if (b < 0) continue;
            composed.at(r, c) = a + b;
        }
        fill_gaps(composed.row(r), W, appearing_a[r] + appearing_b[r], true);
    }

    GbrGraph merged = build_two_level(below, above, composed);

    GbrGraph out(W, H, graph.levels() - 1);
    out.focal = graph.focal;
    out.step_delta = graph.step_delta;
    out.level_view_indices = graph.level_view_indices;
    out.level_view_indices.erase(out.level_view_indices.begin() + level);
    for (int l = 0; l < out.levels(); ++l) {
        // Slot level-1 takes the merged connections with the original
        // colors below; slot level holds the merged step's stored pixels
        // (the skipped view's content lands in the upper level) with the
        // connections that previously left old level+1.
        for (int r = 0; r < H; ++r)
            for (int c = 0; c < W; ++c) {
                if (l == level - 1) {
                    out.set_lambda(l, r, c, merged.lambda(0, r, c));
                    if (graph.has_gamma(l, r, c)) out.set_gamma(l, r, c, graph.gamma(l, r, c));
                } else if (l == level) {
                    out.set_lambda(l, r, c, graph.lambda(l + 1, r, c));
                    if (merged.has_gamma(1, r, c)) out.set_gamma(l, r, c, merged.gamma(1, r, c));
                } else {
                    int sl = l < level ? l : l + 1;
                    out.set_lambda(l, r, c, graph.lambda(sl, r, c));
                    if (graph.has_gamma(sl, r, c)) out.set_gamma(l, r, c, graph.gamma(sl, r, c));
                }
            }
    }
    return out;
}

}  // namespace gbr
