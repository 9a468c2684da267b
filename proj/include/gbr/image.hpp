#pragma once

#include <cstdint>
#include <vector>

#include "gbr/errors.hpp"

namespace gbr {

/// Dense row-major 2-D sample plane.
template <typename T>
class Plane {
public:
    Plane() = default;
    Plane(int width, int height, T fill = T{})
        : width_(width), height_(height),
          samples_(static_cast<size_t>(width) * height, fill) {
        if (width < 0 || height < 0)
            throw InputError("plane dimensions must be non-negative");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return samples_.empty(); }

    T& at(int r, int c) { return samples_[static_cast<size_t>(r) * width_ + c]; }
    const T& at(int r, int c) const { return samples_[static_cast<size_t>(r) * width_ + c]; }

    T* row(int r) { return samples_.data() + static_cast<size_t>(r) * width_; }
    const T* row(int r) const { return samples_.data() + static_cast<size_t>(r) * width_; }

    std::vector<T>& data() { return samples_; }
    const std::vector<T>& data() const { return samples_; }

    template <typename U>
    bool same_size(const Plane<U>& other) const {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Plane& a, const Plane& b) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> samples_;
};

using Image8 = Plane<uint8_t>;         // 8-bit luminance
using Depth16 = Plane<uint16_t>;       // depth in scene units x z_scale
using ResidualImage = Plane<int16_t>;  // signed corrections in [-255, 255]
using DisparityMap = Plane<int32_t>;   // integer horizontal shifts, >= 0

/// One rendered viewpoint: luminance plus its depth channel.
struct ViewPair {
    Image8 image;
    Depth16 depth;
};

inline uint8_t clamp_u8(int v) {
    return static_cast<uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
}

}  // namespace gbr
