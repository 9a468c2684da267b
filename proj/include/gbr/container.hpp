#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gbr/errors.hpp"

namespace gbr {

// Bitstream container. Little-endian layout:
//   'GBR1' | u16 width | u16 height | u8 N | u8 L | L bytes of 1-based
//   level view indices | u32 f (x 2^16 fixed point) | u32 delta (x 2^16)
//   | u16 z_scale | sections until end of stream.
// Each section: 4-byte tag | u32 length | bytes. Known tags: GGEO
// (graph geometry), GCOL (reference + per-level color), GRES (one coded
// residual), DIPP (the depth-based scheme's whole payload). Anything
// else is rejected.

struct Section {
    std::array<char, 4> tag;
    std::vector<uint8_t> bytes;
};

struct Container {
    uint16_t width = 0, height = 0;
    uint8_t num_views = 0, levels = 0;
    std::vector<uint8_t> level_view_indices;  // 1-based, size == levels
    uint32_t f_fixed = 0, delta_fixed = 0;    // x 2^16
    uint16_t z_scale = 256;
    std::vector<Section> sections;

    double f() const { return f_fixed / 65536.0; }
    double delta() const { return delta_fixed / 65536.0; }

    const Section* find(const char* tag) const;
    std::vector<const Section*> find_all(const char* tag) const;
};

std::vector<uint8_t> serialize_container(const Container& c);
Container parse_container(const std::vector<uint8_t>& bytes);

void write_container_file(const std::string& path, const Container& c);
Container read_container_file(const std::string& path);

}  // namespace gbr
