#include "gbr/geometry_codec.hpp"

#include <array>

#include "gbr/range_coder.hpp"

namespace gbr {

namespace {

constexpr std::array<char, 4> MAGIC = {'G', 'G', 'E', 'O'};

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 24));
}

uint32_t get_u32(const std::vector<uint8_t>& in, size_t& pos) {
    if (pos + 4 > in.size()) throw FormatError("geometry payload truncated");
    uint32_t v = in[pos] | (in[pos + 1] << 8) | (in[pos + 2] << 16) |
                 (static_cast<uint32_t>(in[pos + 3]) << 24);
    pos += 4;
    return v;
}

std::vector<uint8_t> encode_column(const std::vector<int32_t>& values) {
    std::vector<uint8_t> out;
    RangeEncoder enc(out);
    AdaptiveModel model(256);
    int32_t prev = 0;
    for (int32_t v : values) {
        put_varint(enc, model, zigzag32(v - prev));
        prev = v;
    }
    enc.finish();
    return out;
}

std::vector<int32_t> decode_column(const std::vector<uint8_t>& bytes, size_t count) {
    std::vector<int32_t> values;
    values.reserve(count);
    if (count == 0) return values;
    RangeDecoder dec(bytes);
    AdaptiveModel model(256);
    int32_t prev = 0;
    for (size_t i = 0; i < count; ++i) {
        prev += unzigzag32(get_varint(dec, model));
        values.push_back(prev);
    }
    return values;
}

}  // namespace

GeometryPayload encode_geometry(const ConnectionTable& table) {
    const size_t m = table.entries.size();
    std::array<std::vector<int32_t>, 4> columns;
    for (auto& col : columns) col.reserve(m);
    for (const auto& e : table.entries) {
        columns[0].push_back(e.row);
        columns[1].push_back(e.col);
        columns[2].push_back(e.level);
        columns[3].push_back(e.value);
    }

    GeometryPayload payload;
    payload.bytes.insert(payload.bytes.end(), MAGIC.begin(), MAGIC.end());
    put_u32(payload.bytes, static_cast<uint32_t>(m));
    for (const auto& col : columns) {
        std::vector<uint8_t> stream = m > 0 ? encode_column(col) : std::vector<uint8_t>{};
        put_u32(payload.bytes, static_cast<uint32_t>(stream.size()));
        payload.bytes.insert(payload.bytes.end(), stream.begin(), stream.end());
    }
    return payload;
}

ConnectionTable decode_geometry(const std::vector<uint8_t>& bytes) {
    size_t pos = 0;
    if (bytes.size() < 4 || !std::equal(MAGIC.begin(), MAGIC.end(), bytes.begin()))
        throw FormatError("geometry payload: bad magic");
    pos = 4;
    const size_t m = get_u32(bytes, pos);

    std::array<std::vector<int32_t>, 4> columns;
    for (auto& col : columns) {
        uint32_t len = get_u32(bytes, pos);
        if (pos + len > bytes.size()) throw FormatError("geometry payload truncated");
        std::vector<uint8_t> stream(bytes.begin() + pos, bytes.begin() + pos + len);
        pos += len;
        col = decode_column(stream, m);
    }

    ConnectionTable table;
    table.entries.reserve(m);
    for (size_t i = 0; i < m; ++i)
        table.entries.push_back(
            {columns[0][i], columns[1][i], columns[2][i], columns[3][i]});
    return table;
}

}  // namespace gbr
