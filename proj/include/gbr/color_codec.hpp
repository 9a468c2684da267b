#pragma once

#include <cstdint>
#include <vector>

#include "gbr/graph.hpp"

namespace gbr {

// Luminance coding. The reference image is coded on its own (lossless
// left-neighbor prediction or the shared block codec); each higher
// level's stored pixels are coded in graph traversal order, every value
// predicted by its graph predecessor: the linked lower-level neighbor at
// a disoccluded run start, the previous stored pixel inside a run, and
// 128 at an appearing-run start.
//
// The connection matrix alone does not pin down where stored runs end
// (several run splits can satisfy the same connections), so each level
// stream also carries the per-row appearing counts and the length of
// every plain disocclusion run, interleaved in traversal order. Runs
// spanned by jump anchors need no length: the anchor arithmetic fixes it.

/// Reference stream: [u8 mode][stream]; mode 0 is lossless predictive,
/// any other value is the block codec quantizer step.
std::vector<uint8_t> encode_reference(const Image8& image, int q);
Image8 decode_reference(const std::vector<uint8_t>& bytes, int width, int height);

/// Lossless predictive coding shared with the reference mode; also used
/// for fair lossless comparisons against depth maps.
std::vector<uint8_t> predictive_encode(const Image8& plane);
Image8 predictive_decode8(const std::vector<uint8_t>& bytes, int width, int height);
std::vector<uint8_t> predictive_encode(const Depth16& plane);
Depth16 predictive_decode16(const std::vector<uint8_t>& bytes, int width, int height);

/// One level's stored pixels against the reconstructed previous view.
/// Returns the stream; pred_out (optional) receives the predicted view
/// (stored pixels at their stored values, the rest traversed from base).
std::vector<uint8_t> encode_new_pixels(const GbrGraph& graph, int level, const Image8& base,
                                       Image8* pred_out = nullptr);

/// Fills gamma/presence of `level` from the stream and returns the
/// predicted view. The graph must carry the decoded connections.
Image8 decode_new_pixels(const std::vector<uint8_t>& bytes, GbrGraph& graph, int level,
                         const Image8& base);

struct ScanSample {
    int row, col;
    int value;
    int predictor;
};

/// Traversal-ordered stored samples of a level with their predictors.
std::vector<ScanSample> graph_order_scan(const GbrGraph& graph, int level, const Image8& base);

}  // namespace gbr
