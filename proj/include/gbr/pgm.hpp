#pragma once

#include <string>

#include "gbr/image.hpp"

namespace gbr {

// Binary PGM (P5). 8-bit uses maxval 255; 16-bit uses maxval 65535 with
// big-endian sample bytes per the PGM convention. Header comments are
// accepted on read, never written.

Image8 read_pgm8(const std::string& path);
Depth16 read_pgm16(const std::string& path);

void write_pgm8(const std::string& path, const Image8& img);
void write_pgm16(const std::string& path, const Depth16& img);

/// Reads the header only and reports the maxval (255 or 65535).
int probe_pgm_maxval(const std::string& path);

}  // namespace gbr
