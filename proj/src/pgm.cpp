#include "gbr/pgm.hpp"

#include <cctype>
#include <fstream>

namespace gbr {
namespace {

// Reads one whitespace-delimited token, skipping '#' comment lines.
int next_header_value(std::istream& in, const std::string& path) {
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (std::isspace(ch)) {
            ch = in.get();
        } else {
            break;
        }
    }
    if (ch == EOF || !std::isdigit(ch))
        throw FormatError(path + ": malformed PGM header");
    long value = 0;
    while (ch != EOF && std::isdigit(ch)) {
        value = value * 10 + (ch - '0');
        if (value > 1 << 30) throw FormatError(path + ": PGM header value too large");
        ch = in.get();
    }
    return static_cast<int>(value);
}

struct PgmHeader {
    int width = 0, height = 0, maxval = 0;
};

PgmHeader read_header(std::istream& in, const std::string& path) {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5')
        throw FormatError(path + ": not a binary PGM (P5) file");
    PgmHeader h;
    h.width = next_header_value(in, path);
    h.height = next_header_value(in, path);
    h.maxval = next_header_value(in, path);
    // The single whitespace byte after maxval was already consumed by the
    // token reader, which stops on the first non-digit character.
    if (h.width <= 0 || h.height <= 0)
        throw FormatError(path + ": bad PGM dimensions");
    if (h.maxval != 255 && h.maxval != 65535)
        throw FormatError(path + ": PGM maxval must be 255 or 65535");
    return h;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path + ": cannot open for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(path + ": cannot open for writing");
    return out;
}

}  // namespace

Image8 read_pgm8(const std::string& path) {
    auto in = open_input(path);
    PgmHeader h = read_header(in, path);
    if (h.maxval != 255) throw FormatError(path + ": expected 8-bit PGM");
    Image8 img(h.width, h.height);
    in.read(reinterpret_cast<char*>(img.data().data()),
            static_cast<std::streamsize>(img.data().size()));
    if (!in) throw FormatError(path + ": truncated PGM raster");
    return img;
}

Depth16 read_pgm16(const std::string& path) {
    auto in = open_input(path);
    PgmHeader h = read_header(in, path);
    if (h.maxval != 65535) throw FormatError(path + ": expected 16-bit PGM");
    Depth16 img(h.width, h.height);
    std::vector<uint8_t> raw(img.data().size() * 2);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) throw FormatError(path + ": truncated PGM raster");
    for (size_t i = 0; i < img.data().size(); ++i)
        img.data()[i] = static_cast<uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
    return img;
}

void write_pgm8(const std::string& path, const Image8& img) {
    auto out = open_output(path);
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data().data()),
              static_cast<std::streamsize>(img.data().size()));
    if (!out) throw FormatError(path + ": write failed");
}

void write_pgm16(const std::string& path, const Depth16& img) {
    auto out = open_output(path);
    out << "P5\n" << img.width() << " " << img.height() << "\n65535\n";
    std::vector<uint8_t> raw(img.data().size() * 2);
    for (size_t i = 0; i < img.data().size(); ++i) {
        raw[2 * i] = static_cast<uint8_t>(img.data()[i] >> 8);
        raw[2 * i + 1] = static_cast<uint8_t>(img.data()[i] & 0xFF);
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw FormatError(path + ": write failed");
}

int probe_pgm_maxval(const std::string& path) {
    auto in = open_input(path);
    return read_header(in, path).maxval;
}

}  // namespace gbr
