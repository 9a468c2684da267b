#include "gbr/range_coder.hpp"

namespace gbr {

namespace {
constexpr uint32_t TOP = 1u << 24;
}

void RangeEncoder::encode(uint32_t cum, uint32_t freq, uint32_t total) {
    // total stays well below 2^24, so range_/total never reaches zero.
    uint32_t r = range_ / total;
    low_ += static_cast<uint64_t>(cum) * r;
    range_ = r * freq;
    while (range_ < TOP) {
        shift_low();
        range_ <<= 8;
    }
}

void RangeEncoder::shift_low() {
    if (static_cast<uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
        uint8_t carry = static_cast<uint8_t>(low_ >> 32);
        if (!first_) out_.push_back(static_cast<uint8_t>(cache_ + carry));
        first_ = false;
        for (; pending_ > 0; --pending_)
            out_.push_back(static_cast<uint8_t>(0xFF + carry));
        cache_ = static_cast<uint8_t>(low_ >> 24);
    } else {
        ++pending_;
    }
    low_ = (low_ << 8) & 0xFFFFFFFFull;
}

void RangeEncoder::finish() {
    for (int i = 0; i < 5; ++i) shift_low();
}

RangeDecoder::RangeDecoder(std::span<const uint8_t> bytes) : bytes_(bytes) {
    for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
}

uint8_t RangeDecoder::next_byte() {
    if (pos_ >= bytes_.size())
        throw FormatError("range coder: truncated stream");
    return bytes_[pos_++];
}

uint32_t RangeDecoder::decode_target(uint32_t total) {
    uint32_t r = range_ / total;
    uint32_t target = static_cast<uint32_t>(code_ / r);
    return target < total ? target : total - 1;
}

void RangeDecoder::decode_update(uint32_t cum, uint32_t freq, uint32_t total) {
    uint32_t r = range_ / total;
    code_ -= static_cast<uint64_t>(cum) * r;
    range_ = r * freq;
    while (range_ < TOP) {
        code_ = (code_ << 8) | next_byte();
        range_ <<= 8;
    }
}

AdaptiveModel::AdaptiveModel(uint32_t alphabet) : alphabet_(alphabet), total_(alphabet) {
    if (alphabet == 0 || alphabet > MAX_ALPHABET)
        throw InputError("adaptive model: alphabet must be in [1, 65536]");
    tree_.assign(alphabet_ + 1, 0);
    for (uint32_t s = 0; s < alphabet_; ++s) add(s, 1);
}

void AdaptiveModel::add(uint32_t symbol, uint32_t delta) {
    for (uint32_t i = symbol + 1; i <= alphabet_; i += i & (~i + 1))
        tree_[i] += delta;
}

uint32_t AdaptiveModel::prefix_sum(uint32_t symbol) const {
    uint32_t sum = 0;
    for (uint32_t i = symbol; i > 0; i -= i & (~i + 1)) sum += tree_[i];
    return sum;
}

uint32_t AdaptiveModel::count(uint32_t symbol) const {
    return prefix_sum(symbol + 1) - prefix_sum(symbol);
}

void AdaptiveModel::halve() {
    std::vector<uint32_t> counts(alphabet_);
    for (uint32_t s = 0; s < alphabet_; ++s) counts[s] = count(s);
    tree_.assign(alphabet_ + 1, 0);
    total_ = 0;
    for (uint32_t s = 0; s < alphabet_; ++s) {
        uint32_t c = (counts[s] + 1) / 2;
        add(s, c);
        total_ += c;
    }
}

void AdaptiveModel::encode(RangeEncoder& enc, uint32_t symbol) {
    if (symbol >= alphabet_)
        throw InputError("adaptive model: symbol outside alphabet");
    enc.encode(prefix_sum(symbol), count(symbol), total_);
    add(symbol, INCREMENT);
    total_ += INCREMENT;
    if (total_ >= HALVE_LIMIT && total_ >= 2 * alphabet_) halve();
}

uint32_t AdaptiveModel::decode(RangeDecoder& dec) {
    uint32_t target = dec.decode_target(total_);
    // Fenwick descent: largest symbol whose prefix sum is <= target.
    uint32_t idx = 0;
    uint32_t remaining = target;
    uint32_t mask = 1;
    while ((mask << 1) <= alphabet_) mask <<= 1;
    for (; mask > 0; mask >>= 1) {
        uint32_t next = idx + mask;
        if (next <= alphabet_ && tree_[next] <= remaining) {
            idx = next;
            remaining -= tree_[next];
        }
    }
    uint32_t symbol = idx;
    uint32_t cum = target - remaining;
    dec.decode_update(cum, count(symbol), total_);
    add(symbol, INCREMENT);
    total_ += INCREMENT;
    if (total_ >= HALVE_LIMIT && total_ >= 2 * alphabet_) halve();
    return symbol;
}

std::vector<uint8_t> ac_encode(std::span<const uint32_t> symbols, uint32_t alphabet) {
    std::vector<uint8_t> out;
    RangeEncoder enc(out);
    AdaptiveModel model(alphabet);
    for (uint32_t s : symbols) model.encode(enc, s);
    enc.finish();
    return out;
}

std::vector<uint32_t> ac_decode(std::span<const uint8_t> bytes, size_t count, uint32_t alphabet) {
    std::vector<uint32_t> out;
    out.reserve(count);
    RangeDecoder dec(bytes);
    AdaptiveModel model(alphabet);
    for (size_t i = 0; i < count; ++i) out.push_back(model.decode(dec));
    return out;
}

void put_varint(RangeEncoder& enc, AdaptiveModel& model, uint32_t value) {
    while (value >= 0x80) {
        model.encode(enc, 0x80 | (value & 0x7F));
        value >>= 7;
    }
    model.encode(enc, value);
}

uint32_t get_varint(RangeDecoder& dec, AdaptiveModel& model) {
    uint32_t value = 0;
    int shift = 0;
    for (;;) {
        uint32_t byte = model.decode(dec);
        value |= (byte & 0x7F) << shift;
        if ((byte & 0x80) == 0) break;
        shift += 7;
        if (shift > 28) throw FormatError("varint: overlong encoding");
    }
    return value;
}

}  // namespace gbr
