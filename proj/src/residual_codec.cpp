#include "gbr/residual_codec.hpp"

#include <algorithm>

#include "gbr/range_coder.hpp"

namespace gbr {

namespace {

constexpr int BLOCK = 8;
constexpr uint32_t RUN_ALPHABET = 65;  // runs 0..63 plus end-of-block
constexpr uint32_t EOB = 64;

// Sequency-ordered 8-point Hadamard matrix (entries +-1, rows sorted by
// sign-change count so the zigzag scan sees rising frequency).
struct Hadamard8 {
    int m[BLOCK][BLOCK];
    Hadamard8() {
        int natural[BLOCK][BLOCK];
        for (int i = 0; i < BLOCK; ++i)
            for (int j = 0; j < BLOCK; ++j)
                natural[i][j] = __builtin_popcount(i & j) % 2 ? -1 : 1;
        int order[BLOCK];
        for (int i = 0; i < BLOCK; ++i) {
            int changes = 0;
            for (int j = 1; j < BLOCK; ++j)
                if (natural[i][j] != natural[i][j - 1]) ++changes;
            order[i] = changes;
        }
        for (int s = 0; s < BLOCK; ++s) {
            for (int i = 0; i < BLOCK; ++i)
                if (order[i] == s)
                    for (int j = 0; j < BLOCK; ++j) m[s][j] = natural[i][j];
        }
    }
};
const Hadamard8 H;

constexpr int ZIGZAG[64] = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

void forward_wht(const int32_t in[BLOCK][BLOCK], int32_t out[BLOCK][BLOCK]) {
    int32_t tmp[BLOCK][BLOCK];
    for (int u = 0; u < BLOCK; ++u)
        for (int j = 0; j < BLOCK; ++j) {
            int32_t acc = 0;
            for (int i = 0; i < BLOCK; ++i) acc += H.m[u][i] * in[i][j];
            tmp[u][j] = acc;
        }
    for (int u = 0; u < BLOCK; ++u)
        for (int v = 0; v < BLOCK; ++v) {
            int32_t acc = 0;
            for (int j = 0; j < BLOCK; ++j) acc += tmp[u][j] * H.m[v][j];
            out[u][v] = acc;
        }
}

void inverse_wht(const int32_t in[BLOCK][BLOCK], int32_t out[BLOCK][BLOCK]) {
    int64_t tmp[BLOCK][BLOCK];
    for (int i = 0; i < BLOCK; ++i)
        for (int v = 0; v < BLOCK; ++v) {
            int64_t acc = 0;
            for (int u = 0; u < BLOCK; ++u) acc += static_cast<int64_t>(H.m[u][i]) * in[u][v];
            tmp[i][v] = acc;
        }
    for (int i = 0; i < BLOCK; ++i)
        for (int j = 0; j < BLOCK; ++j) {
            int64_t acc = 0;
            for (int v = 0; v < BLOCK; ++v) acc += tmp[i][v] * H.m[v][j];
            // H Ht = 8I, so the double product scales by 64 exactly.
            out[i][j] = static_cast<int32_t>(acc / 64);
        }
}

int32_t quantize(int32_t v, int q) {
    if (q == 1) return v;
    return v >= 0 ? (v + q / 2) / q : -((-v + q / 2) / q);
}

}  // namespace

bool quality_in_ladder(int q) {
    return std::find(RESIDUAL_Q_LADDER.begin(), RESIDUAL_Q_LADDER.end(), q) !=
           RESIDUAL_Q_LADDER.end();
}

std::vector<uint8_t> encode_plane_blocks(const Plane<int32_t>& plane, int q) {
    if (q < 1) throw InputError("block codec: quantizer step must be >= 1");
    const int W = plane.width(), H8 = plane.height();
    const int bw = (W + BLOCK - 1) / BLOCK, bh = (H8 + BLOCK - 1) / BLOCK;

    std::vector<uint8_t> out;
    RangeEncoder enc(out);
    AdaptiveModel run_model(RUN_ALPHABET);
    AdaptiveModel value_model(256);

    int32_t block[BLOCK][BLOCK];
    int32_t coef[BLOCK][BLOCK];
    for (int by = 0; by < bh; ++by)
        for (int bx = 0; bx < bw; ++bx) {
            for (int i = 0; i < BLOCK; ++i)
                for (int j = 0; j < BLOCK; ++j) {
                    int r = std::min(by * BLOCK + i, H8 - 1);  // edge replication
                    int c = std::min(bx * BLOCK + j, W - 1);
                    block[i][j] = plane.at(r, c);
                }
            forward_wht(block, coef);
            int run = 0;
            int last_nonzero = -1;
            for (int k = 0; k < 64; ++k) {
                int32_t v = quantize(coef[ZIGZAG[k] / 8][ZIGZAG[k] % 8], q);
                if (v == 0) {
                    ++run;
                } else {
                    run_model.encode(enc, static_cast<uint32_t>(run));
                    put_varint(enc, value_model, zigzag32(v));
                    run = 0;
                    last_nonzero = k;
                }
            }
            if (last_nonzero < 63) run_model.encode(enc, EOB);
        }
    enc.finish();
    return out;
}

Plane<int32_t> decode_plane_blocks(const std::vector<uint8_t>& bytes, int width, int height,
                                   int q) {
    if (q < 1) throw InputError("block codec: quantizer step must be >= 1");
    const int bw = (width + BLOCK - 1) / BLOCK, bh = (height + BLOCK - 1) / BLOCK;
    Plane<int32_t> plane(width, height);

    RangeDecoder dec(bytes);
    AdaptiveModel run_model(RUN_ALPHABET);
    AdaptiveModel value_model(256);

    int32_t coef[BLOCK][BLOCK];
    int32_t block[BLOCK][BLOCK];
    for (int by = 0; by < bh; ++by)
        for (int bx = 0; bx < bw; ++bx) {
            for (auto& row : coef) row[0] = row[1] = row[2] = row[3] = row[4] = row[5] =
                                       row[6] = row[7] = 0;
            int k = 0;
            while (k < 64) {
                uint32_t run = run_model.decode(dec);
                if (run == EOB) break;
                k += static_cast<int>(run);
                if (k >= 64) throw FormatError("block codec: run past block end");
                int32_t v = unzigzag32(get_varint(dec, value_model));
                if (v == 0) throw FormatError("block codec: zero coefficient coded");
                coef[ZIGZAG[k] / 8][ZIGZAG[k] % 8] = v * q;
                ++k;
            }
            inverse_wht(coef, block);
            for (int i = 0; i < BLOCK; ++i)
                for (int j = 0; j < BLOCK; ++j) {
                    int r = by * BLOCK + i, c = bx * BLOCK + j;
                    if (r < height && c < width) plane.at(r, c) = block[i][j];
                }
        }
    return plane;
}

ResidualImage compute_residual(const Image8& original, const Image8& predicted,
                               const Plane<uint8_t>& new_pixel_mask) {
    if (!original.same_size(predicted) || !original.same_size(new_pixel_mask))
        throw InputError("compute_residual: dimension mismatch");
    ResidualImage res(original.width(), original.height());
    for (int r = 0; r < original.height(); ++r)
        for (int c = 0; c < original.width(); ++c)
            res.at(r, c) = new_pixel_mask.at(r, c)
                               ? 0
                               : static_cast<int16_t>(original.at(r, c) - predicted.at(r, c));
    return res;
}

Plane<uint8_t> new_pixel_mask(const GbrGraph& graph, int level) {
    Plane<uint8_t> mask(graph.width(), graph.height());
    for (int r = 0; r < graph.height(); ++r)
        for (int c = 0; c < graph.width(); ++c)
            mask.at(r, c) = graph.has_gamma(level, r, c) ? 1 : 0;
    return mask;
}

std::vector<uint8_t> encode_residual(const ResidualImage& res, int q) {
    if (!quality_in_ladder(q)) throw InputError("encode_residual: q outside the ladder");
    Plane<int32_t> shifted(res.width(), res.height());
    for (size_t i = 0; i < res.data().size(); ++i)
        shifted.data()[i] = res.data()[i] + 255;  // [0, 510]
    std::vector<uint8_t> stream = encode_plane_blocks(shifted, q);
    std::vector<uint8_t> out = {'G', 'R', 'E', 'S'};
    out.push_back(static_cast<uint8_t>(q));
    uint32_t len = static_cast<uint32_t>(stream.size());
    out.push_back(static_cast<uint8_t>(len));
    out.push_back(static_cast<uint8_t>(len >> 8));
    out.push_back(static_cast<uint8_t>(len >> 16));
    out.push_back(static_cast<uint8_t>(len >> 24));
    out.insert(out.end(), stream.begin(), stream.end());
    return out;
}

ResidualImage decode_residual(const std::vector<uint8_t>& bytes, int width, int height,
                              int* q_out) {
    if (bytes.size() < 9 || bytes[0] != 'G' || bytes[1] != 'R' || bytes[2] != 'E' ||
        bytes[3] != 'S')
        throw FormatError("residual payload: bad magic");
    int q = bytes[4];
    if (!quality_in_ladder(q)) throw FormatError("residual payload: bad quantizer step");
    uint32_t len = bytes[5] | (bytes[6] << 8) | (bytes[7] << 16) |
                   (static_cast<uint32_t>(bytes[8]) << 24);
    if (bytes.size() != 9 + static_cast<size_t>(len))
        throw FormatError("residual payload: length mismatch");
    std::vector<uint8_t> stream(bytes.begin() + 9, bytes.end());
    Plane<int32_t> shifted = decode_plane_blocks(stream, width, height, q);
    ResidualImage res(width, height);
    for (size_t i = 0; i < res.data().size(); ++i)
        res.data()[i] =
            static_cast<int16_t>(std::clamp(shifted.data()[i] - 255, -255, 255));
    if (q_out) *q_out = q;
    return res;
}

Image8 apply_residual(const Image8& predicted, const ResidualImage& res) {
    if (!predicted.same_size(res)) throw InputError("apply_residual: dimension mismatch");
    Image8 out(predicted.width(), predicted.height());
    for (size_t i = 0; i < out.data().size(); ++i)
        out.data()[i] = clamp_u8(predicted.data()[i] + res.data()[i]);
    return out;
}

}  // namespace gbr
