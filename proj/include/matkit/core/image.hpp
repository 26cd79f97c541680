#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace matkit::core {

// Interleaved row-major RGB, unit-interval floats.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;  // height * width * 3

    RgbImage() = default;
    RgbImage(int w, int h, float fill = 0.0f)
        : width(w), height(h), data(static_cast<size_t>(w) * h * 3, fill) {
        if (w < 1 || h < 1) throw std::invalid_argument("RgbImage: dimensions must be positive");
    }

    float& at(int x, int y, int c) { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
    float at(int x, int y, int c) const { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

// Per-pixel opacity in [0,1].
struct AlphaMatte {
    int width = 0;
    int height = 0;
    std::vector<float> data;  // height * width

    AlphaMatte() = default;
    AlphaMatte(int w, int h, float fill = 0.0f)
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {
        if (w < 1 || h < 1) throw std::invalid_argument("AlphaMatte: dimensions must be positive");
    }

    float& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    float at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

// Strictly {0,1} per pixel.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;  // height * width

    BinaryMask() = default;
    BinaryMask(int w, int h, uint8_t fill = 0)
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {
        if (w < 1 || h < 1) throw std::invalid_argument("BinaryMask: dimensions must be positive");
    }

    uint8_t& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    uint8_t at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

inline float clamp01(float v) { return v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v); }

void require_unit_range(const RgbImage& img, const std::string& what);
void require_unit_range(const AlphaMatte& alpha, const std::string& what);
void require_binary(const BinaryMask& mask, const std::string& what);

inline bool same_size(const RgbImage& a, const RgbImage& b) {
    return a.width == b.width && a.height == b.height;
}
inline bool same_size(const AlphaMatte& a, const AlphaMatte& b) {
    return a.width == b.width && a.height == b.height;
}
inline bool same_size(const RgbImage& a, const AlphaMatte& b) {
    return a.width == b.width && a.height == b.height;
}

}  // namespace matkit::core
