#include "gbr/depth_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "gbr/color_codec.hpp"
#include "gbr/graph.hpp"
#include "gbr/residual_codec.hpp"

namespace gbr {

namespace {

// DIPP record kinds, laid out as (u8 kind | u32 length | bytes) inside
// the section: the first view's color and depth, then one color and one
// depth residual per predicted view.
enum RecordKind : uint8_t {
    REF_COLOR = 1,
    REF_DEPTH = 2,
    RES_COLOR = 3,
    RES_DEPTH = 4,
};

void put_record(std::vector<uint8_t>& out, RecordKind kind, const std::vector<uint8_t>& bytes) {
    out.push_back(kind);
    uint32_t len = static_cast<uint32_t>(bytes.size());
    out.push_back(static_cast<uint8_t>(len));
    out.push_back(static_cast<uint8_t>(len >> 8));
    out.push_back(static_cast<uint8_t>(len >> 16));
    out.push_back(static_cast<uint8_t>(len >> 24));
    out.insert(out.end(), bytes.begin(), bytes.end());
}

struct Record {
    RecordKind kind;
    std::vector<uint8_t> bytes;
};

std::vector<Record> parse_records(const std::vector<uint8_t>& bytes) {
    std::vector<Record> records;
    size_t pos = 0;
    while (pos < bytes.size()) {
        if (pos + 5 > bytes.size()) throw FormatError("depth payload truncated");
        Record rec;
        rec.kind = static_cast<RecordKind>(bytes[pos]);
        uint32_t len = bytes[pos + 1] | (bytes[pos + 2] << 8) | (bytes[pos + 3] << 16) |
                       (static_cast<uint32_t>(bytes[pos + 4]) << 24);
        pos += 5;
        if (pos + len > bytes.size()) throw FormatError("depth payload truncated");
        rec.bytes.assign(bytes.begin() + pos, bytes.begin() + pos + len);
        pos += len;
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<uint8_t> encode_depth_plane(const Depth16& depth, int q) {
    Plane<int32_t> wide(depth.width(), depth.height());
    for (size_t i = 0; i < wide.data().size(); ++i) wide.data()[i] = depth.data()[i];
    std::vector<uint8_t> out;
    out.push_back(static_cast<uint8_t>(q));
    auto stream = encode_plane_blocks(wide, q);
    out.insert(out.end(), stream.begin(), stream.end());
    return out;
}

Depth16 decode_depth_plane(const std::vector<uint8_t>& bytes, int width, int height) {
    if (bytes.empty()) throw FormatError("depth plane stream truncated");
    int q = bytes[0];
    if (q < 1) throw FormatError("depth plane stream: bad quantizer");
    std::vector<uint8_t> stream(bytes.begin() + 1, bytes.end());
    Plane<int32_t> wide = decode_plane_blocks(stream, width, height, q);
    Depth16 out(width, height);
    for (size_t i = 0; i < out.data().size(); ++i)
        out.data()[i] = static_cast<uint16_t>(std::clamp(wide.data()[i], 1, 65535));
    return out;
}

std::vector<uint8_t> encode_depth_residual(const Plane<int32_t>& res, int q) {
    std::vector<uint8_t> out;
    out.push_back(static_cast<uint8_t>(q));
    auto stream = encode_plane_blocks(res, q);
    out.insert(out.end(), stream.begin(), stream.end());
    return out;
}

Plane<int32_t> decode_depth_residual(const std::vector<uint8_t>& bytes, int width, int height) {
    if (bytes.empty()) throw FormatError("depth residual stream truncated");
    int q = bytes[0];
    if (q < 1) throw FormatError("depth residual stream: bad quantizer");
    std::vector<uint8_t> stream(bytes.begin() + 1, bytes.end());
    return decode_plane_blocks(stream, width, height, q);
}

Depth16 apply_depth_residual(const Depth16& pred, const Plane<int32_t>& res) {
    Depth16 out(pred.width(), pred.height());
    for (size_t i = 0; i < out.data().size(); ++i)
        out.data()[i] =
            static_cast<uint16_t>(std::clamp(pred.data()[i] + res.data()[i], 1, 65535));
    return out;
}

}  // namespace

WarpedImage warp_forward(const Image8& image, const DisparityMap& disp) {
    if (!image.same_size(disp)) throw InputError("warp_forward: dimension mismatch");
    const int W = image.width(), H = image.height();
    WarpedImage out{Image8(W, H), Plane<uint8_t>(W, H, 1)};
    std::vector<int32_t> best(W);
    for (int r = 0; r < H; ++r) {
        std::fill(best.begin(), best.end(), -1);
        for (int c = 0; c < W; ++c) {
            int t = c + disp.at(r, c);
            if (t < 0 || t >= W) continue;
            if (disp.at(r, c) > best[t]) {
                best[t] = disp.at(r, c);
                out.image.at(r, t) = image.at(r, c);
                out.holes.at(r, t) = 0;
            }
        }
    }
    return out;
}

WarpedDepth warp_forward_depth(const Depth16& depth, const DisparityMap& disp) {
    if (!depth.same_size(disp)) throw InputError("warp_forward: dimension mismatch");
    const int W = depth.width(), H = depth.height();
    WarpedDepth out{Depth16(W, H), Plane<uint8_t>(W, H, 1)};
    std::vector<int32_t> best(W);
    for (int r = 0; r < H; ++r) {
        std::fill(best.begin(), best.end(), -1);
        for (int c = 0; c < W; ++c) {
            int t = c + disp.at(r, c);
            if (t < 0 || t >= W) continue;
            if (disp.at(r, c) > best[t]) {
                best[t] = disp.at(r, c);
                out.depth.at(r, t) = depth.at(r, c);
                out.holes.at(r, t) = 0;
            }
        }
    }
    return out;
}

Container ipppp_encode(const Dataset& ds, const DepthBaselineConfig& cfg,
                       std::vector<Image8>* recon_out) {
    const int n = static_cast<int>(ds.views.size());
    if (n < 2) throw InputError("ipppp_encode: need at least two views");
    if (ds.depths.size() != ds.views.size())
        throw InputError("ipppp_encode: depth missing for some view");
    if (cfg.q_depth < 1 || !quality_in_ladder(cfg.q_depth))
        throw InputError("ipppp_encode: q_depth outside the ladder");
    if (cfg.q_color != 0 && !quality_in_ladder(cfg.q_color))
        throw InputError("ipppp_encode: q_color outside the ladder");
    if (!quality_in_ladder(cfg.q_res)) throw InputError("ipppp_encode: q_res outside the ladder");

    const int W = ds.views[0].width(), H = ds.views[0].height();
    std::vector<uint8_t> payload;

    auto ref_color_bytes = encode_reference(ds.views[0], cfg.q_color);
    put_record(payload, REF_COLOR, ref_color_bytes);
    Image8 recon_color = decode_reference(ref_color_bytes, W, H);

    auto ref_depth_bytes = encode_depth_plane(ds.depths[0], cfg.q_depth);
    put_record(payload, REF_DEPTH, ref_depth_bytes);
    Depth16 recon_depth = decode_depth_plane(ref_depth_bytes, W, H);

    std::vector<Image8> recon{recon_color};
    for (int v = 1; v < n; ++v) {
        DisparityMap disp = depth_to_disparity(recon_depth, ds.f, ds.delta, ds.z_scale);
        WarpedImage pred = warp_forward(recon_color, disp);
        WarpedDepth pred_depth = warp_forward_depth(recon_depth, disp);

        ResidualImage res(W, H);
        for (int r = 0; r < H; ++r)
            for (int c = 0; c < W; ++c)
                res.at(r, c) = static_cast<int16_t>(ds.views[v].at(r, c) - pred.image.at(r, c));
        auto res_bytes = encode_residual(res, cfg.q_res);
        put_record(payload, RES_COLOR, res_bytes);
        recon_color = apply_residual(pred.image, decode_residual(res_bytes, W, H));

        Plane<int32_t> dres(W, H);
        for (int r = 0; r < H; ++r)
            for (int c = 0; c < W; ++c)
                dres.at(r, c) = static_cast<int32_t>(ds.depths[v].at(r, c)) -
                                pred_depth.depth.at(r, c);
        auto dres_bytes = encode_depth_residual(dres, cfg.q_depth);
        put_record(payload, RES_DEPTH, dres_bytes);
        recon_depth = apply_depth_residual(pred_depth.depth,
                                           decode_depth_residual(dres_bytes, W, H));

        recon.push_back(recon_color);
    }
    if (recon_out) *recon_out = recon;

    Container c;
    c.width = static_cast<uint16_t>(W);
    c.height = static_cast<uint16_t>(H);
    c.num_views = static_cast<uint8_t>(n);
    c.levels = static_cast<uint8_t>(n);
    for (int v = 1; v <= n; ++v) c.level_view_indices.push_back(static_cast<uint8_t>(v));
    c.f_fixed = static_cast<uint32_t>(std::lround(ds.f * 65536.0));
    c.delta_fixed = static_cast<uint32_t>(std::lround(ds.delta * 65536.0));
    c.z_scale = static_cast<uint16_t>(ds.z_scale);
    c.sections.push_back({{'D', 'I', 'P', 'P'}, std::move(payload)});
    return c;
}

std::vector<Image8> ipppp_decode(const Container& c) {
    const Section* dipp = c.find("DIPP");
    if (!dipp) throw FormatError("container carries no depth-based payload");
    const int W = c.width, H = c.height, n = c.num_views;
    auto records = parse_records(dipp->bytes);
    size_t idx = 0;
    auto take = [&](RecordKind kind) -> const std::vector<uint8_t>& {
        if (idx >= records.size() || records[idx].kind != kind)
            throw FormatError("depth payload: unexpected record order");
        return records[idx++].bytes;
    };

    Image8 recon_color = decode_reference(take(REF_COLOR), W, H);
    Depth16 recon_depth = decode_depth_plane(take(REF_DEPTH), W, H);
    std::vector<Image8> out{recon_color};
    for (int v = 1; v < n; ++v) {
        DisparityMap disp = depth_to_disparity(recon_depth, c.f(), c.delta(), c.z_scale);
        WarpedImage pred = warp_forward(recon_color, disp);
        WarpedDepth pred_depth = warp_forward_depth(recon_depth, disp);
        recon_color = apply_residual(pred.image, decode_residual(take(RES_COLOR), W, H));
        recon_depth =
            apply_depth_residual(pred_depth.depth, decode_depth_residual(take(RES_DEPTH), W, H));
        out.push_back(recon_color);
    }
    if (idx != records.size()) throw FormatError("depth payload: trailing records");
    return out;
}

}  // namespace gbr
