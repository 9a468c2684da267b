#include "gbr/color_codec.hpp"

#include <algorithm>
#include <limits>

#include "gbr/range_coder.hpp"
#include "gbr/residual_codec.hpp"
#include "gbr/traverse.hpp"

namespace gbr {

namespace {

template <typename T>
std::vector<uint8_t> predictive_encode_impl(const Plane<T>& plane) {
    std::vector<uint8_t> out;
    RangeEncoder enc(out);
    AdaptiveModel model(256);
    const int32_t half = (static_cast<int32_t>(std::numeric_limits<T>::max()) + 1) / 2;
    for (int r = 0; r < plane.height(); ++r)
        for (int c = 0; c < plane.width(); ++c) {
            int32_t predictor = c > 0       ? plane.at(r, c - 1)
                                : r > 0     ? plane.at(r - 1, 0)
                                            : half;
            put_varint(enc, model, zigzag32(static_cast<int32_t>(plane.at(r, c)) - predictor));
        }
    enc.finish();
    return out;
}

template <typename T>
Plane<T> predictive_decode_impl(const std::vector<uint8_t>& bytes, int width, int height) {
    Plane<T> plane(width, height);
    RangeDecoder dec(bytes);
    AdaptiveModel model(256);
    const int32_t half = (static_cast<int32_t>(std::numeric_limits<T>::max()) + 1) / 2;
    const int32_t lo = 0, hi = std::numeric_limits<T>::max();
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            int32_t predictor = c > 0       ? plane.at(r, c - 1)
                                : r > 0     ? plane.at(r - 1, 0)
                                            : half;
            int32_t v = predictor + unzigzag32(get_varint(dec, model));
            if (v < lo || v > hi) throw FormatError("predictive stream: sample out of range");
            plane.at(r, c) = static_cast<T>(v);
        }
    return plane;
}

}  // namespace

std::vector<uint8_t> predictive_encode(const Image8& plane) {
    return predictive_encode_impl(plane);
}
Image8 predictive_decode8(const std::vector<uint8_t>& bytes, int width, int height) {
    return predictive_decode_impl<uint8_t>(bytes, width, height);
}
std::vector<uint8_t> predictive_encode(const Depth16& plane) {
    return predictive_encode_impl(plane);
}
Depth16 predictive_decode16(const std::vector<uint8_t>& bytes, int width, int height) {
    return predictive_decode_impl<uint16_t>(bytes, width, height);
}

std::vector<uint8_t> encode_reference(const Image8& image, int q) {
    std::vector<uint8_t> out;
    if (q == 0) {
        out.push_back(0);
        auto stream = predictive_encode(image);
        out.insert(out.end(), stream.begin(), stream.end());
        return out;
    }
    if (!quality_in_ladder(q)) throw InputError("encode_reference: q outside the ladder");
    Plane<int32_t> wide(image.width(), image.height());
    for (size_t i = 0; i < wide.data().size(); ++i) wide.data()[i] = image.data()[i];
    out.push_back(static_cast<uint8_t>(q));
    auto stream = encode_plane_blocks(wide, q);
    out.insert(out.end(), stream.begin(), stream.end());
    return out;
}

Image8 decode_reference(const std::vector<uint8_t>& bytes, int width, int height) {
    if (bytes.empty()) throw FormatError("reference stream truncated");
    int mode = bytes[0];
    std::vector<uint8_t> stream(bytes.begin() + 1, bytes.end());
    if (mode == 0) return predictive_decode8(stream, width, height);
    if (!quality_in_ladder(mode)) throw FormatError("reference stream: bad mode");
    Plane<int32_t> wide = decode_plane_blocks(stream, width, height, mode);
    Image8 img(width, height);
    for (size_t i = 0; i < img.data().size(); ++i) img.data()[i] = clamp_u8(wide.data()[i]);
    return img;
}

namespace {

// Shared predictor chain for the three traversal sinks below.
struct PredictorState {
    int last_value = 0;

    int predictor(const Image8& base, int row, int pos, RunKind kind, int link_col) const {
        if (pos > 0) return last_value;
        return kind == RunKind::Appearing ? 128 : base.at(row, link_col);
    }
};

class EncodeSink : public RowTraversalSink {
public:
    EncodeSink(const GbrGraph& g, int level, const Image8& base, Image8& pred,
               RangeEncoder& enc)
        : g_(g), level_(level), base_(base), pred_(pred), enc_(enc),
          counts_(256), lengths_(256), residues_(256) {}

    int appearing_count(int row) override {
        int c = 0;
        while (c < g_.width() && g_.has_gamma(level_, row, c)) ++c;
        put_varint(enc_, counts_, static_cast<uint32_t>(c));
        return c;
    }
    int run_length(int row, int, int out_col) override {
        int c = out_col;
        while (c < g_.width() && g_.has_gamma(level_, row, c)) ++c;
        put_varint(enc_, lengths_, static_cast<uint32_t>(c - out_col));
        return c - out_col;
    }
    void stored(int row, int out_col, int pos, RunKind kind, int link_col) override {
        int value = g_.gamma(level_, row, out_col);
        int predictor = state_.predictor(base_, row, pos, kind, link_col);
        put_varint(enc_, residues_, zigzag32(value - predictor));
        state_.last_value = value;
        pred_.at(row, out_col) = static_cast<uint8_t>(value);
    }
    void reference(int row, int base_col, int out_col) override {
        pred_.at(row, out_col) = base_.at(row, base_col);
    }

private:
    const GbrGraph& g_;
    int level_;
    const Image8& base_;
    Image8& pred_;
    RangeEncoder& enc_;
    AdaptiveModel counts_, lengths_, residues_;
    PredictorState state_;
};

class DecodeSink : public RowTraversalSink {
public:
    DecodeSink(GbrGraph& g, int level, const Image8& base, Image8& pred, RangeDecoder& dec)
        : g_(g), level_(level), base_(base), pred_(pred), dec_(dec),
          counts_(256), lengths_(256), residues_(256) {}

    int appearing_count(int) override {
        return static_cast<int>(get_varint(dec_, counts_));
    }
    int run_length(int, int, int) override {
        return static_cast<int>(get_varint(dec_, lengths_));
    }
    void stored(int row, int out_col, int pos, RunKind kind, int link_col) override {
        int predictor = state_.predictor(base_, row, pos, kind, link_col);
        int value = predictor + unzigzag32(get_varint(dec_, residues_));
        if (value < 0 || value > 255)
            throw FormatError("color stream: stored pixel out of range");
        g_.set_gamma(level_, row, out_col, static_cast<uint8_t>(value));
        state_.last_value = value;
        pred_.at(row, out_col) = static_cast<uint8_t>(value);
    }
    void reference(int row, int base_col, int out_col) override {
        pred_.at(row, out_col) = base_.at(row, base_col);
    }

private:
    GbrGraph& g_;
    int level_;
    const Image8& base_;
    Image8& pred_;
    RangeDecoder& dec_;
    AdaptiveModel counts_, lengths_, residues_;
    PredictorState state_;
};

class ScanSink : public RowTraversalSink {
public:
    ScanSink(const GbrGraph& g, int level, const Image8& base, std::vector<ScanSample>& out)
        : g_(g), level_(level), base_(base), out_(out) {}

    int appearing_count(int row) override {
        int c = 0;
        while (c < g_.width() && g_.has_gamma(level_, row, c)) ++c;
        return c;
    }
    int run_length(int row, int, int out_col) override {
        int c = out_col;
        while (c < g_.width() && g_.has_gamma(level_, row, c)) ++c;
        return c - out_col;
    }
    void stored(int row, int out_col, int pos, RunKind kind, int link_col) override {
        int value = g_.gamma(level_, row, out_col);
        out_.push_back({row, out_col, value, state_.predictor(base_, row, pos, kind, link_col)});
        state_.last_value = value;
    }
    void reference(int, int, int) override {}

private:
    const GbrGraph& g_;
    int level_;
    const Image8& base_;
    std::vector<ScanSample>& out_;
    PredictorState state_;
};

void check_level_args(const GbrGraph& graph, int level, const Image8& base) {
    if (level < 1 || level >= graph.levels())
        throw InputError("color codec: level out of range");
    if (base.width() != graph.width() || base.height() != graph.height())
        throw InputError("color codec: base dimension mismatch");
}

}  // namespace

std::vector<uint8_t> encode_new_pixels(const GbrGraph& graph, int level, const Image8& base,
                                       Image8* pred_out) {
    check_level_args(graph, level, base);
    std::vector<uint8_t> out;
    Image8 pred(graph.width(), graph.height());
    RangeEncoder enc(out);
    EncodeSink sink(graph, level, base, pred, enc);
    for (int r = 0; r < graph.height(); ++r)
        traverse_level_row(graph.lambda_row(level - 1, r), graph.width(), r, level, sink);
    enc.finish();
    if (pred_out) *pred_out = std::move(pred);
    return out;
}

Image8 decode_new_pixels(const std::vector<uint8_t>& bytes, GbrGraph& graph, int level,
                         const Image8& base) {
    check_level_args(graph, level, base);
    graph.clear_gamma_level(level);
    Image8 pred(graph.width(), graph.height());
    RangeDecoder dec(bytes);
    DecodeSink sink(graph, level, base, pred, dec);
    for (int r = 0; r < graph.height(); ++r)
        traverse_level_row(graph.lambda_row(level - 1, r), graph.width(), r, level, sink);
    return pred;
}

std::vector<ScanSample> graph_order_scan(const GbrGraph& graph, int level, const Image8& base) {
    check_level_args(graph, level, base);
    std::vector<ScanSample> out;
    ScanSink sink(graph, level, base, out);
    for (int r = 0; r < graph.height(); ++r)
        traverse_level_row(graph.lambda_row(level - 1, r), graph.width(), r, level, sink);
    return out;
}

}  // namespace gbr
