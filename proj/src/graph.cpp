#include "gbr/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gbr {

GbrGraph::GbrGraph(int width, int height, int levels)
    : width_(width), height_(height), levels_(levels) {
    if (width <= 0 || height <= 0 || levels <= 0)
        throw InputError("graph dimensions must be positive");
    size_t n = static_cast<size_t>(width) * height * levels;
    gamma_.assign(n, 0);
    gamma_set_.assign(n, 0);
    lambda_.assign(n, 0);
}

void GbrGraph::clear_gamma_level(int level) {
    for (int r = 0; r < height_; ++r)
        for (int c = 0; c < width_; ++c) {
            gamma_[idx(level, r, c)] = 0;
            gamma_set_[idx(level, r, c)] = 0;
        }
}

size_t GbrGraph::connection_count() const {
    size_t m = 0;
    for (uint16_t v : lambda_)
        if (v != 0) ++m;
    return m;
}

DisparityMap depth_to_disparity(const Depth16& depth, double f, double delta, int z_scale) {
    DisparityMap out(depth.width(), depth.height());
    const double fdz = f * delta * z_scale;
    for (int r = 0; r < depth.height(); ++r)
        for (int c = 0; c < depth.width(); ++c) {
            uint16_t raw = depth.at(r, c);
            if (raw == 0) throw InputError("depth_to_disparity: non-positive depth");
            out.at(r, c) = static_cast<int32_t>(std::floor(fdz / raw + 0.5));
        }
    return out;
}

namespace {

void check_disparity_range(const DisparityMap& disp) {
    const int W = disp.width();
    for (int32_t d : disp.data())
        if (d < 0 || d > W)
            throw InputError("disparity exceeds image width");
}

// One construction step: scans row r of the transition between graph
// levels (level-1, level), writing stored pixels into gamma[level] and
// connections into lambda[level-1]. `next` is the view this level
// encodes, `disp` the previous view's dense disparity over the step
// baseline. The scan keeps the emission position of the target row
// exact: a column whose landing c + D(c) matches the position is
// consumed, a forward gap at the adjacent column stores the revealed
// pixels behind a disocclusion link, and columns whose landing falls
// behind the position are skipped under a jump pair whose two anchors
// also encode any stored gap ((c2+v2) - (c1+v1) pixels).
void build_row(GbrGraph& g, int level, int r, const uint8_t* next_row, const int32_t* disp_row) {
    const int W = g.width();
    auto landing = [&](int c) { return c + disp_row[c]; };
    auto inconsistent = [&](const char* what) {
        throw InputError(std::string("disparity row inconsistent: ") + what + " (row " +
                         std::to_string(r) + ")");
    };

    const int appearing = std::min(disp_row[0], W);
    for (int c = 0; c < appearing; ++c) g.set_gamma(level, r, c, next_row[c]);
    int pos = appearing;  // next target column to explain
    if (pos >= W) return;  // the whole target row enters at the border

    // Reference column 0 lands right after the appearing run.
    int d_prev = disp_row[0];
    ++pos;
    int c = 1;              // next reference column to examine
    int last_consumed = 0;  // last reference column that produced output

    while (pos < W && c < W) {
        // First column from here whose landing can continue the row.
        int resume = c;
        while (resume < W && (landing(resume) < pos || landing(resume) >= W)) ++resume;
        if (resume >= W) {
            // Nothing lands in the remaining targets: they exist only in
            // the next view, stored behind a plain disocclusion link.
            g.set_lambda(level - 1, r, c - 1, static_cast<uint16_t>(d_prev + 1));
            for (int t = pos; t < W; ++t) g.set_gamma(level, r, t, next_row[t]);
            pos = W;
            break;
        }
        const int gap = landing(resume) - pos;
        if (resume == c) {
            if (gap > 0) {
                // Disocclusion at the adjacent column.
                g.set_lambda(level - 1, r, c - 1, static_cast<uint16_t>(d_prev + 1));
                for (int t = pos; t < pos + gap; ++t) g.set_gamma(level, r, t, next_row[t]);
                pos += gap;
            }
        } else {
            // Jump over columns that land behind the current position.
            if (disp_row[resume] == 0) inconsistent("jump to zero disparity");
            g.set_lambda(level - 1, r, c - 1, static_cast<uint16_t>(d_prev));
            g.set_lambda(level - 1, r, resume - 1,
                         static_cast<uint16_t>(disp_row[resume]));
            for (int t = pos; t < pos + gap; ++t) g.set_gamma(level, r, t, next_row[t]);
            pos += gap;
        }
        // Consume the resume column; its landing now matches exactly.
        ++pos;
        last_consumed = resume;
        d_prev = disp_row[resume];
        c = resume + 1;
    }

    if (pos < W) inconsistent("target row under-filled");
    if (c < W && g.lambda(level - 1, r, last_consumed) == 0)
        g.set_lambda(level - 1, r, last_consumed, static_cast<uint16_t>(W - c));
}

void build_step(GbrGraph& g, int level, const Image8& ref, const Image8& next,
                const DisparityMap& disp) {
    (void)ref;
    check_disparity_range(disp);
    for (int r = 0; r < g.height(); ++r)
        build_row(g, level, r, next.row(r), disp.row(r));
}

}  // namespace

GbrGraph build_two_level(const Image8& ref, const Image8& next, const DisparityMap& disp) {
    if (!ref.same_size(next) || !ref.same_size(disp))
        throw InputError("build_two_level: dimension mismatch");
    GbrGraph g(ref.width(), ref.height(), 2);
    g.level_view_indices = {1, 2};
    for (int r = 0; r < g.height(); ++r)
        for (int c = 0; c < g.width(); ++c) g.set_gamma(0, r, c, ref.at(r, c));
    build_step(g, 1, ref, next, disp);
    return g;
}

GbrGraph build_graph(const std::vector<Image8>& views, const std::vector<Depth16>& depths,
                     double f, double delta, const std::vector<int>& view_indices,
                     int z_scale) {
    if (views.empty() || view_indices.empty())
        throw InputError("build_graph: no views");
    if (view_indices.front() != 1)
        throw InputError("build_graph: level view indices must start at view 1");
    for (size_t i = 1; i < view_indices.size(); ++i)
        if (view_indices[i] <= view_indices[i - 1])
            throw InputError("build_graph: level view indices must be strictly increasing");
    if (view_indices.back() > static_cast<int>(views.size()))
        throw InputError("build_graph: view index beyond dataset");
    const int L = static_cast<int>(view_indices.size());
    for (int l = 0; l + 1 < L; ++l)
        if (static_cast<size_t>(view_indices[l]) > depths.size())
            throw InputError("build_graph: missing depth for an included view");

    GbrGraph g(views[0].width(), views[0].height(), L);
    g.level_view_indices = view_indices;
    g.focal = f;
    g.step_delta = delta;
    for (int r = 0; r < g.height(); ++r)
        for (int c = 0; c < g.width(); ++c) g.set_gamma(0, r, c, views[0].at(r, c));

    for (int l = 1; l < L; ++l) {
        const int prev_view = view_indices[l - 1];
        const int steps = view_indices[l] - prev_view;
        DisparityMap disp =
            depth_to_disparity(depths[prev_view - 1], f, delta * steps, z_scale);
        build_step(g, l, views[prev_view - 1], views[view_indices[l] - 1], disp);
    }
    return g;
}

ConnectionTable extract_table(const GbrGraph& graph) {
    ConnectionTable t;
    for (int l = 0; l < graph.levels(); ++l)
        for (int r = 0; r < graph.height(); ++r)
            for (int c = 0; c < graph.width(); ++c) {
                uint16_t v = graph.lambda(l, r, c);
                if (v != 0) t.entries.push_back({r, c, l, v});
            }
    return t;
}

GbrGraph inject_table(const ConnectionTable& table, int width, int height, int levels) {
    GbrGraph g(width, height, levels);
    const ConnectionEntry* prev = nullptr;
    for (const auto& e : table.entries) {
        if (e.row < 0 || e.row >= height || e.col < 0 || e.col >= width || e.level < 0 ||
            e.level >= levels || e.value < 1 || e.value > 65535)
            throw FormatError("connection table: entry out of range");
        if (prev) {
            bool ordered = std::tie(prev->level, prev->row, prev->col) <
                           std::tie(e.level, e.row, e.col);
            if (!ordered) throw FormatError("connection table: entries not sorted");
        }
        g.set_lambda(e.level, e.row, e.col, static_cast<uint16_t>(e.value));
        prev = &e;
    }
    return g;
}

}  // namespace gbr
