#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "gbr/pgm.hpp"

using namespace gbr;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
    return fs::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("8-bit round trip") {
    std::mt19937 rng(1);
    Image8 img(37, 21);
    for (auto& v : img.data()) v = static_cast<uint8_t>(rng());
    auto path = temp_file("gbr_pgm8.pgm");
    write_pgm8(path.string(), img);
    CHECK(read_pgm8(path.string()) == img);
    fs::remove(path);
}

TEST_CASE("16-bit round trip") {
    std::mt19937 rng(2);
    Depth16 img(19, 33);
    for (auto& v : img.data()) v = static_cast<uint16_t>(rng());
    auto path = temp_file("gbr_pgm16.pgm");
    write_pgm16(path.string(), img);
    CHECK(read_pgm16(path.string()) == img);
    fs::remove(path);
}

TEST_CASE("16-bit samples are written big-endian") {
    Depth16 img(1, 1);
    img.at(0, 0) = 0x0102;
    auto path = temp_file("gbr_pgm16_be.pgm");
    write_pgm16(path.string(), img);
    std::ifstream in(path, std::ios::binary);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    REQUIRE(bytes.size() >= 2);
    CHECK(bytes[bytes.size() - 2] == 0x01);
    CHECK(bytes[bytes.size() - 1] == 0x02);
    CHECK(read_pgm16(path.string()).at(0, 0) == 0x0102);
    fs::remove(path);
}

TEST_CASE("header comments are skipped") {
    auto path = temp_file("gbr_pgm_comment.pgm");
    {
        std::ofstream out(path, std::ios::binary);
        out << "P5\n# a comment line\n3 1\n# another\n255\n";
        out.put(7);
        out.put(8);
        out.put(9);
    }
    Image8 img = read_pgm8(path.string());
    CHECK(img.width() == 3);
    CHECK(img.height() == 1);
    CHECK(img.at(0, 2) == 9);
    fs::remove(path);
}

TEST_CASE("bad files are rejected") {
    auto path = temp_file("gbr_pgm_bad.pgm");
    {
        std::ofstream out(path, std::ios::binary);
        out << "P6\n2 2\n255\n....";
    }
    CHECK_THROWS_AS(read_pgm8(path.string()), FormatError);
    {
        std::ofstream out(path, std::ios::binary);
        out << "P5\n2 2\n255\nab";  // raster too short
    }
    CHECK_THROWS_AS(read_pgm8(path.string()), FormatError);
    {
        std::ofstream out(path, std::ios::binary);
        out << "P5\n2 2\n1000\nabcd";  // unsupported maxval
    }
    CHECK_THROWS_AS(read_pgm8(path.string()), FormatError);
    fs::remove(path);
}
