#include "gbr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "gbr/color_codec.hpp"
#include "gbr/depth_baseline.hpp"
#include "gbr/geometry_codec.hpp"
#include "gbr/residual_codec.hpp"
#include "gbr/traverse.hpp"

namespace gbr {

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 24));
}

uint32_t get_u32(const std::vector<uint8_t>& in, size_t& pos) {
    if (pos + 4 > in.size()) throw FormatError("color section truncated");
    uint32_t v = in[pos] | (in[pos + 1] << 8) | (in[pos + 2] << 16) |
                 (static_cast<uint32_t>(in[pos + 3]) << 24);
    pos += 4;
    return v;
}

// GCOL section: 'GCOL' | u8 mode | (u32 length | bytes) for the
// reference and then one unit per level above the base.
std::vector<uint8_t> assemble_gcol(int mode, const std::vector<std::vector<uint8_t>>& units) {
    std::vector<uint8_t> out = {'G', 'C', 'O', 'L'};
    out.push_back(static_cast<uint8_t>(mode));
    for (const auto& u : units) {
        put_u32(out, static_cast<uint32_t>(u.size()));
        out.insert(out.end(), u.begin(), u.end());
    }
    return out;
}

std::vector<std::vector<uint8_t>> split_gcol(const std::vector<uint8_t>& bytes, int* mode_out) {
    if (bytes.size() < 5 || std::memcmp(bytes.data(), "GCOL", 4) != 0)
        throw FormatError("color section: bad magic");
    *mode_out = bytes[4];
    std::vector<std::vector<uint8_t>> units;
    size_t pos = 5;
    while (pos < bytes.size()) {
        uint32_t len = get_u32(bytes, pos);
        if (pos + len > bytes.size()) throw FormatError("color section truncated");
        units.emplace_back(bytes.begin() + pos, bytes.begin() + pos + len);
        pos += len;
    }
    return units;
}

// Views sitting between two included levels are synthesized from both
// sides; the recovered geometry spans the full gap, warped by the view's
// fractional position inside it.
Image8 synthesize_between(const GbrGraph& graph, int level, const Image8& left,
                          const Image8& right, int view, int left_view, int right_view) {
    DisparityMap ldisp = disparity_from_graph(graph, level);
    DisparityMap rdisp = warp_disparity_to_right(ldisp);
    double t = static_cast<double>(view - left_view) / (right_view - left_view);
    return interpolate_view(left, ldisp, right, rdisp, t);
}

}  // namespace

Container gbr_encode(const Dataset& ds, const GbrConfig& cfg,
                     std::vector<Image8>* recon_out) {
    const int n = static_cast<int>(ds.views.size());
    if (n < 1) throw InputError("gbr_encode: empty dataset");
    if (cfg.levels.empty() || cfg.levels.front() != 1)
        throw InputError("gbr_encode: levels must start at view 1");
    if (n > 1 && (cfg.levels.size() < 2 || cfg.levels.back() != n))
        throw InputError("gbr_encode: levels must include the last view");
    if (cfg.q_res != 0 && !quality_in_ladder(cfg.q_res))
        throw InputError("gbr_encode: q_res outside the ladder");

    const int W = ds.views[0].width(), H = ds.views[0].height();
    const int L = static_cast<int>(cfg.levels.size());

    GbrGraph graph = build_graph(ds.views, ds.depths, ds.f, ds.delta, cfg.levels, ds.z_scale);

    Container c;
    c.width = static_cast<uint16_t>(W);
    c.height = static_cast<uint16_t>(H);
    c.num_views = static_cast<uint8_t>(n);
    c.levels = static_cast<uint8_t>(L);
    for (int v : cfg.levels) c.level_view_indices.push_back(static_cast<uint8_t>(v));
    c.f_fixed = static_cast<uint32_t>(std::lround(ds.f * 65536.0));
    c.delta_fixed = static_cast<uint32_t>(std::lround(ds.delta * 65536.0));
    c.z_scale = static_cast<uint16_t>(ds.z_scale);

    c.sections.push_back({{'G', 'G', 'E', 'O'}, encode_geometry(extract_table(graph)).bytes});

    // Color: reference, then new pixels per level against the decoded
    // chain (residuals applied as we go, exactly as the decoder will).
    std::vector<std::vector<uint8_t>> units;
    units.push_back(encode_reference(ds.views[0], cfg.q_ref));
    std::vector<Image8> level_recon(L);
    level_recon[0] = decode_reference(units[0], W, H);

    std::vector<std::pair<int, std::vector<uint8_t>>> residual_sections;  // (view, bytes)
    for (int l = 1; l < L; ++l) {
        Image8 pred;
        units.push_back(encode_new_pixels(graph, l, level_recon[l - 1], &pred));
        const int view = cfg.levels[l];
        if (cfg.q_res != 0) {
            ResidualImage res =
                compute_residual(ds.views[view - 1], pred, new_pixel_mask(graph, l));
            auto bytes = encode_residual(res, cfg.q_res);
            level_recon[l] = apply_residual(pred, decode_residual(bytes, W, H));
            residual_sections.emplace_back(view, std::move(bytes));
        } else {
            level_recon[l] = pred;
        }
    }
    c.sections.push_back({{'G', 'C', 'O', 'L'}, assemble_gcol(cfg.q_ref, units)});

    // Interpolated views between included levels.
    std::vector<Image8> all_recon(n);
    for (int l = 0; l < L; ++l) all_recon[cfg.levels[l] - 1] = level_recon[l];
    for (int l = 0; l + 1 < L; ++l) {
        for (int view = cfg.levels[l] + 1; view < cfg.levels[l + 1]; ++view) {
            Image8 pred = synthesize_between(graph, l, level_recon[l], level_recon[l + 1],
                                             view, cfg.levels[l], cfg.levels[l + 1]);
            if (cfg.q_res != 0) {
                ResidualImage res(W, H);
                for (int r = 0; r < H; ++r)
                    for (int ccol = 0; ccol < W; ++ccol)
                        res.at(r, ccol) = static_cast<int16_t>(ds.views[view - 1].at(r, ccol) -
                                                               pred.at(r, ccol));
                auto bytes = encode_residual(res, cfg.q_res);
                all_recon[view - 1] = apply_residual(pred, decode_residual(bytes, W, H));
                residual_sections.emplace_back(view, std::move(bytes));
            } else {
                all_recon[view - 1] = pred;
            }
        }
    }

    std::sort(residual_sections.begin(), residual_sections.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [view, bytes] : residual_sections)
        c.sections.push_back({{'G', 'R', 'E', 'S'}, std::move(bytes)});

    if (recon_out) *recon_out = std::move(all_recon);
    return c;
}

std::vector<Image8> gbr_decode(const Container& c) {
    const int W = c.width, H = c.height, n = c.num_views, L = c.levels;
    const Section* geo = c.find("GGEO");
    const Section* col = c.find("GCOL");
    if (!geo || !col) throw FormatError("container misses graph sections");

    std::vector<int> levels(c.level_view_indices.begin(), c.level_view_indices.end());
    ConnectionTable table = decode_geometry(geo->bytes);
    GbrGraph graph = inject_table(table, W, H, L);
    graph.level_view_indices = levels;
    graph.focal = c.f();
    graph.step_delta = c.delta();

    auto gres = c.find_all("GRES");
    const size_t expected_residuals = static_cast<size_t>(n - 1);
    if (!gres.empty() && gres.size() != expected_residuals)
        throw FormatError("container: wrong number of residual sections");
    // Residual sections follow view order 2..N; map view -> section.
    std::vector<const Section*> residual_of_view(n + 1, nullptr);
    if (!gres.empty()) {
        size_t k = 0;
        for (int view = 2; view <= n; ++view) residual_of_view[view] = gres[k++];
    }

    int mode = 0;
    auto units = split_gcol(col->bytes, &mode);
    if (units.size() != static_cast<size_t>(L))
        throw FormatError("color section: unit count mismatch");

    std::vector<Image8> level_recon(L);
    level_recon[0] = decode_reference(units[0], W, H);
    for (int l = 1; l < L; ++l) {
        Image8 pred = decode_new_pixels(units[l], graph, l, level_recon[l - 1]);
        const int view = levels[l];
        if (residual_of_view[view])
            level_recon[l] =
                apply_residual(pred, decode_residual(residual_of_view[view]->bytes, W, H));
        else
            level_recon[l] = pred;
    }

    std::vector<Image8> out(n);
    for (int l = 0; l < L; ++l) out[levels[l] - 1] = level_recon[l];
    for (int l = 0; l + 1 < L; ++l) {
        for (int view = levels[l] + 1; view < levels[l + 1]; ++view) {
            Image8 pred = synthesize_between(graph, l, level_recon[l], level_recon[l + 1],
                                             view, levels[l], levels[l + 1]);
            if (residual_of_view[view])
                out[view - 1] =
                    apply_residual(pred, decode_residual(residual_of_view[view]->bytes, W, H));
            else
                out[view - 1] = pred;
        }
    }
    return out;
}

std::vector<Image8> decode_views(const Container& c) {
    if (c.find("DIPP")) return ipppp_decode(c);
    return gbr_decode(c);
}

RateBreakdown rate_breakdown(const Container& c) {
    RateBreakdown br;
    for (const auto& s : c.sections) {
        int64_t bits = static_cast<int64_t>(s.bytes.size()) * 8;
        if (std::memcmp(s.tag.data(), "GGEO", 4) == 0) {
            br.geometry_bits += bits;
        } else if (std::memcmp(s.tag.data(), "GCOL", 4) == 0) {
            br.texture_bits += bits;
        } else if (std::memcmp(s.tag.data(), "GRES", 4) == 0) {
            br.residual_bits += bits;
        } else if (std::memcmp(s.tag.data(), "DIPP", 4) == 0) {
            // Records split per kind: depth streams count as geometry,
            // the first color as texture, color residuals as residual.
            size_t pos = 0;
            while (pos + 5 <= s.bytes.size()) {
                uint8_t kind = s.bytes[pos];
                uint32_t len = s.bytes[pos + 1] | (s.bytes[pos + 2] << 8) |
                               (s.bytes[pos + 3] << 16) |
                               (static_cast<uint32_t>(s.bytes[pos + 4]) << 24);
                int64_t record_bits = static_cast<int64_t>(5 + len) * 8;
                if (kind == 1)
                    br.texture_bits += record_bits;
                else if (kind == 2 || kind == 4)
                    br.geometry_bits += record_bits;
                else if (kind == 3)
                    br.residual_bits += record_bits;
                else
                    throw FormatError("depth payload: unknown record kind");
                pos += 5 + len;
            }
        }
    }
    return br;
}

}  // namespace gbr
