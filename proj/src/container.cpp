#include "gbr/container.hpp"

#include <cstring>
#include <fstream>

namespace gbr {

namespace {

const char MAGIC[4] = {'G', 'B', 'R', '1'};
const char* KNOWN_TAGS[] = {"GGEO", "GCOL", "GRES", "DIPP"};

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    put_u16(out, static_cast<uint16_t>(v));
    put_u16(out, static_cast<uint16_t>(v >> 16));
}

struct Reader {
    const std::vector<uint8_t>& bytes;
    size_t pos = 0;

    void need(size_t n) const {
        if (pos + n > bytes.size()) throw FormatError("container truncated");
    }
    uint8_t u8() {
        need(1);
        return bytes[pos++];
    }
    uint16_t u16() {
        need(2);
        uint16_t v = bytes[pos] | (bytes[pos + 1] << 8);
        pos += 2;
        return v;
    }
    uint32_t u32() {
        uint32_t lo = u16();
        return lo | (static_cast<uint32_t>(u16()) << 16);
    }
};

bool known_tag(const std::array<char, 4>& tag) {
    for (const char* t : KNOWN_TAGS)
        if (std::memcmp(tag.data(), t, 4) == 0) return true;
    return false;
}

}  // namespace

const Section* Container::find(const char* tag) const {
    for (const auto& s : sections)
        if (std::memcmp(s.tag.data(), tag, 4) == 0) return &s;
    return nullptr;
}

std::vector<const Section*> Container::find_all(const char* tag) const {
    std::vector<const Section*> out;
    for (const auto& s : sections)
        if (std::memcmp(s.tag.data(), tag, 4) == 0) out.push_back(&s);
    return out;
}

std::vector<uint8_t> serialize_container(const Container& c) {
    if (c.level_view_indices.size() != c.levels)
        throw InputError("container: level count mismatch");
    std::vector<uint8_t> out;
    out.insert(out.end(), MAGIC, MAGIC + 4);
    put_u16(out, c.width);
    put_u16(out, c.height);
    out.push_back(c.num_views);
    out.push_back(c.levels);
    out.insert(out.end(), c.level_view_indices.begin(), c.level_view_indices.end());
    put_u32(out, c.f_fixed);
    put_u32(out, c.delta_fixed);
    put_u16(out, c.z_scale);
    for (const auto& s : c.sections) {
        if (!known_tag(s.tag)) throw InputError("container: unknown section tag");
        out.insert(out.end(), s.tag.begin(), s.tag.end());
        put_u32(out, static_cast<uint32_t>(s.bytes.size()));
        out.insert(out.end(), s.bytes.begin(), s.bytes.end());
    }
    return out;
}

Container parse_container(const std::vector<uint8_t>& bytes) {
    Reader in{bytes};
    in.need(4);
    if (std::memcmp(bytes.data(), MAGIC, 4) != 0)
        throw FormatError("container: bad magic");
    in.pos = 4;
    Container c;
    c.width = in.u16();
    c.height = in.u16();
    c.num_views = in.u8();
    c.levels = in.u8();
    in.need(c.levels);
    c.level_view_indices.assign(bytes.begin() + in.pos, bytes.begin() + in.pos + c.levels);
    in.pos += c.levels;
    c.f_fixed = in.u32();
    c.delta_fixed = in.u32();
    c.z_scale = in.u16();
    while (in.pos < bytes.size()) {
        Section s;
        in.need(4);
        std::memcpy(s.tag.data(), bytes.data() + in.pos, 4);
        in.pos += 4;
        if (!known_tag(s.tag)) throw FormatError("container: unknown section tag");
        uint32_t len = in.u32();
        in.need(len);
        s.bytes.assign(bytes.begin() + in.pos, bytes.begin() + in.pos + len);
        in.pos += len;
        c.sections.push_back(std::move(s));
    }
    return c;
}

void write_container_file(const std::string& path, const Container& c) {
    std::vector<uint8_t> bytes = serialize_container(c);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(path + ": cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError(path + ": write failed");
}

Container read_container_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path + ": cannot open for reading");
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return parse_container(bytes);
}

}  // namespace gbr
