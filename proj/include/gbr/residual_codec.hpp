#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gbr/graph.hpp"
#include "gbr/image.hpp"

namespace gbr {

// Self-contained lossy block codec shared by residuals, the lossy
// reference mode and the depth baseline: 8x8 sequency-ordered integer
// Hadamard transform (exactly invertible, so q = 1 is lossless), uniform
// quantization with step q, zigzag scan, zero-run-length symbols and the
// adaptive range coder. Residual samples are level-shifted by +255 into
// [0, 510] before the transform.

inline constexpr std::array<int, 7> RESIDUAL_Q_LADDER = {1, 2, 4, 8, 16, 32, 64};

bool quality_in_ladder(int q);

/// Generic plane pipeline: any int32 samples, caller owns value ranges.
std::vector<uint8_t> encode_plane_blocks(const Plane<int32_t>& plane, int q);
Plane<int32_t> decode_plane_blocks(const std::vector<uint8_t>& bytes, int width, int height,
                                   int q);

/// original - predicted, forced to zero where the level supplies a new
/// pixel (those are carried losslessly by the color codec).
ResidualImage compute_residual(const Image8& original, const Image8& predicted,
                               const Plane<uint8_t>& new_pixel_mask);

/// Presence mask of one graph level, for compute_residual.
Plane<uint8_t> new_pixel_mask(const GbrGraph& graph, int level);

// Payload: u8 q | u32 length | stream (little-endian).
std::vector<uint8_t> encode_residual(const ResidualImage& res, int q);
ResidualImage decode_residual(const std::vector<uint8_t>& bytes, int width, int height,
                              int* q_out = nullptr);

/// clamp(predicted + res, 0, 255)
Image8 apply_residual(const Image8& predicted, const ResidualImage& res);

}  // namespace gbr
