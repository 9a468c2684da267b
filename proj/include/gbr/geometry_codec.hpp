#pragma once

#include <cstdint>
#include <vector>

#include "gbr/graph.hpp"

namespace gbr {

// Lossless coding of the connection table. Layout (little-endian):
//   'GGEO' | u32 M | 4 x (u32 byte_length | bytes)
// One stream per table column in (row, col, level, value) order. Each
// column is differenced down the table (first entry against 0), the
// differences zigzag-mapped and varint-packed through a per-stream
// adaptive byte model.

struct GeometryPayload {
    std::vector<uint8_t> bytes;

    size_t bit_size() const { return bytes.size() * 8; }
};

GeometryPayload encode_geometry(const ConnectionTable& table);
ConnectionTable decode_geometry(const std::vector<uint8_t>& bytes);

}  // namespace gbr
