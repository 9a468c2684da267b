#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "gbr/range_coder.hpp"

using namespace gbr;

namespace {

double empirical_entropy_bits(const std::vector<uint32_t>& symbols) {
    if (symbols.empty()) return 0.0;
    std::map<uint32_t, size_t> hist;
    for (uint32_t s : symbols) ++hist[s];
    double h = 0.0;
    for (auto& [s, n] : hist) {
        double p = static_cast<double>(n) / symbols.size();
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

TEST_CASE("random sequences round trip") {
    std::mt19937 rng(42);
    for (int iter = 0; iter < 60; ++iter) {
        uint32_t alphabet = 1 + rng() % 300;
        size_t count = rng() % 2000;
        std::vector<uint32_t> symbols(count);
        // Mix a skewed and a uniform source so the model sees both.
        bool skew = (iter % 2) == 0;
        for (auto& s : symbols)
            s = skew ? static_cast<uint32_t>(std::min<uint32_t>(alphabet - 1, rng() % 7))
                     : rng() % alphabet;
        auto bytes = ac_encode(symbols, alphabet);
        auto decoded = ac_decode(bytes, symbols.size(), alphabet);
        REQUIRE(decoded == symbols);
    }
}

TEST_CASE("all-equal sequence of length 1000 codes below 150 bits") {
    std::vector<uint32_t> symbols(1000, 17);
    auto bytes = ac_encode(symbols, 256);
    CHECK(bytes.size() * 8 < 150);
    CHECK(ac_decode(bytes, symbols.size(), 256) == symbols);
}

TEST_CASE("empty sequence is header-only") {
    std::vector<uint32_t> symbols;
    auto bytes = ac_encode(symbols, 256);
    CHECK(bytes.size() <= 8);
    CHECK(ac_decode(bytes, 0, 256).empty());
}

TEST_CASE("uniform random bytes are incompressible") {
    std::mt19937 rng(7);
    std::vector<uint32_t> symbols(4096);
    for (auto& s : symbols) s = rng() % 256;
    auto bytes = ac_encode(symbols, 256);
    CHECK(bytes.size() * 8 >= static_cast<size_t>(4096 * 8 * 0.99));
    CHECK(ac_decode(bytes, symbols.size(), 256) == symbols);
}

TEST_CASE("code length tracks empirical entropy on stationary sources") {
    std::mt19937 rng(11);
    std::discrete_distribution<int> dist({40, 20, 10, 10, 5, 5, 5, 3, 1, 1});
    std::vector<uint32_t> symbols(8000);
    for (auto& s : symbols) s = static_cast<uint32_t>(dist(rng));
    auto bytes = ac_encode(symbols, 16);
    double bound = symbols.size() * (empirical_entropy_bits(symbols) + 0.1) + 64;
    CHECK(static_cast<double>(bytes.size() * 8) <= bound);
}

TEST_CASE("symbol outside the alphabet is rejected") {
    std::vector<uint32_t> symbols{5};
    CHECK_THROWS_AS(ac_encode(symbols, 5), InputError);
    CHECK_THROWS_AS(AdaptiveModel(0), InputError);
    CHECK_THROWS_AS(AdaptiveModel(70000), InputError);
}

TEST_CASE("truncated streams raise a format error") {
    std::vector<uint32_t> symbols(100, 3);
    for (size_t i = 0; i < symbols.size(); i += 3) symbols[i] = 200;
    auto bytes = ac_encode(symbols, 256);
    REQUIRE(bytes.size() > 4);
    bytes.resize(bytes.size() / 2);
    CHECK_THROWS_AS(ac_decode(bytes, symbols.size(), 256), FormatError);
}

TEST_CASE("varint packing round trips across magnitudes") {
    std::vector<uint32_t> values{0, 1, 127, 128, 255, 300, 16383, 16384, 1u << 20, (1u << 28) - 1};
    std::vector<uint8_t> bytes;
    {
        RangeEncoder enc(bytes);
        AdaptiveModel model(256);
        for (uint32_t v : values) put_varint(enc, model, v);
        enc.finish();
    }
    RangeDecoder dec(bytes);
    AdaptiveModel model(256);
    for (uint32_t v : values) CHECK(get_varint(dec, model) == v);
}

TEST_CASE("zigzag maps signed to non-negative and back") {
    for (int32_t v : {0, 1, -1, 2, -2, 255, -255, 65535, -65535, 1 << 20, -(1 << 20)}) {
        CHECK(unzigzag32(zigzag32(v)) == v);
        CHECK(zigzag32(v) <= 2u * static_cast<uint32_t>(std::abs(static_cast<int64_t>(v))) + 1);
    }
}
