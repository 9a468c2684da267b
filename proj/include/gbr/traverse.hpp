#pragma once

#include "gbr/graph.hpp"

namespace gbr {

// Row traversal grammar shared by reconstruction, the color codec and
// disparity recovery. One traversal of a level emits exactly W pixels
// per row: the appearing run, then reference pixels from the level
// below interleaved with stored disocclusion runs, occlusion jumps and
// the trailing disappearing marker. The sink supplies run lengths
// (from graph presence or from a coded stream) and receives each
// emission in order.

enum class RunKind { Appearing, Disoccluded };

struct RowTraversalSink {
    virtual ~RowTraversalSink() = default;
    /// Stored pixels opening the row.
    virtual int appearing_count(int row) = 0;
    /// Stored-run length for the disocclusion link at link_col; the run
    /// starts at output column out_col.
    virtual int run_length(int row, int link_col, int out_col) = 0;
    /// Stored pixel emitted at out_col, the pos-th pixel of its run.
    virtual void stored(int row, int out_col, int pos, RunKind kind, int link_col) = 0;
    /// Reference pixel base_col emitted at out_col.
    virtual void reference(int row, int base_col, int out_col) = 0;
};

/// Drives one row. `lam` is the connection row of the level below the
/// one being emitted. Throws IntegrityError on protocol violations
/// (unpaired jumps, over/underruns), naming the row and level.
void traverse_level_row(const uint16_t* lam, int width, int row, int level,
                        RowTraversalSink& sink);

/// Emits the view of `level` (0-based) given the dense view of the level
/// below, using the graph's own stored pixels and presence.
Image8 traverse_step(const GbrGraph& graph, int level, const Image8& base);

/// Full reconstruction of a level's view; level 0 returns the reference
/// verbatim.
Image8 reconstruct_view(const GbrGraph& graph, int level);

/// Dense disparity carrying the view of `level` to the next level,
/// recovered from connection values alone: consumed columns get their
/// traversal offset, every other column the last value seen scanning
/// left to right (the first segment uses the appearing-pixel count).
DisparityMap disparity_from_graph(const GbrGraph& graph, int level);

/// Variant used for level composition: occluded columns borrow the
/// disparity that resumes after their jump instead of the pre-jump one.
DisparityMap disparity_from_graph_occlusion_filled(const GbrGraph& graph, int level);

/// Bidirectional synthesis at fraction t between two received views.
/// Forward-warps left by t*d and right by (1-t)*d (nearer disparity
/// wins, leftmost source keeps ties), averages where both land, and
/// inpaints leftover holes from the nearest horizontal neighbor.
Image8 interpolate_view(const Image8& left, const DisparityMap& left_disp, const Image8& right,
                        const DisparityMap& right_disp, double t);

/// Carries a left-view disparity map into right-view coordinates
/// (z-buffered forward warp of the values, holes filled from the
/// smaller neighboring disparity).
DisparityMap warp_disparity_to_right(const DisparityMap& left_disp);

}  // namespace gbr
