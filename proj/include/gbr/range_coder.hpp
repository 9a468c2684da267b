#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gbr/errors.hpp"

namespace gbr {

// 32-bit range coder with carry handling (byte renormalization at 2^24)
// plus an adaptive order-0 frequency model. Model state: counts start at
// 1, each coded symbol adds INCREMENT, and all counts are halved once the
// total reaches HALVE_LIMIT. Encoder and decoder update identically, so
// streams are self-synchronizing.

class RangeEncoder {
public:
    explicit RangeEncoder(std::vector<uint8_t>& out) : out_(out) {}

    /// Narrows the interval to [cum, cum+freq) out of total.
    void encode(uint32_t cum, uint32_t freq, uint32_t total);
    /// Flushes pending state; the encoder must not be used afterwards.
    void finish();

private:
    void shift_low();

    std::vector<uint8_t>& out_;
    uint64_t low_ = 0;
    uint32_t range_ = 0xFFFFFFFFu;
    uint8_t cache_ = 0;
    int64_t pending_ = 0;
    bool first_ = true;
};

class RangeDecoder {
public:
    explicit RangeDecoder(std::span<const uint8_t> bytes);

    /// Returns a value in [0, total) locating the next symbol's interval.
    uint32_t decode_target(uint32_t total);
    /// Consumes the symbol whose interval [cum, cum+freq) was located.
    void decode_update(uint32_t cum, uint32_t freq, uint32_t total);

    size_t consumed() const { return pos_; }

private:
    uint8_t next_byte();

    std::span<const uint8_t> bytes_;
    size_t pos_ = 0;
    uint64_t code_ = 0;
    uint32_t range_ = 0xFFFFFFFFu;
};

/// Adaptive order-0 model over a fixed alphabet, cumulative counts kept
/// in a Fenwick tree so large alphabets stay cheap.
class AdaptiveModel {
public:
    static constexpr uint32_t MAX_ALPHABET = 65536;
    static constexpr uint32_t INCREMENT = 32;
    static constexpr uint32_t HALVE_LIMIT = 1u << 16;

    explicit AdaptiveModel(uint32_t alphabet);

    uint32_t alphabet() const { return alphabet_; }
    uint32_t total() const { return total_; }

    void encode(RangeEncoder& enc, uint32_t symbol);
    uint32_t decode(RangeDecoder& dec);

private:
    uint32_t prefix_sum(uint32_t symbol) const;  // counts of symbols < symbol
    uint32_t count(uint32_t symbol) const;
    void add(uint32_t symbol, uint32_t delta);
    void halve();

    uint32_t alphabet_;
    uint32_t total_;
    std::vector<uint32_t> tree_;
};

/// One-shot helpers: a whole sequence through a fresh adaptive model.
std::vector<uint8_t> ac_encode(std::span<const uint32_t> symbols, uint32_t alphabet);
std::vector<uint32_t> ac_decode(std::span<const uint8_t> bytes, size_t count, uint32_t alphabet);

// Variable-length byte packing for unsigned values (7 data bits per byte,
// high bit marks continuation) and the zigzag map folding signed values
// onto non-negative ones. Streams built on top of the byte model use
// these so every coded symbol stays inside one byte.

inline uint32_t zigzag32(int32_t v) {
    return (static_cast<uint32_t>(v) << 1) ^ static_cast<uint32_t>(v >> 31);
}
inline int32_t unzigzag32(uint32_t v) {
    return static_cast<int32_t>(v >> 1) ^ -static_cast<int32_t>(v & 1);
}

void put_varint(RangeEncoder& enc, AdaptiveModel& model, uint32_t value);
uint32_t get_varint(RangeDecoder& dec, AdaptiveModel& model);

}  // namespace gbr
