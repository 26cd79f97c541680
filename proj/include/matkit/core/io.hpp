#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "matkit/core/image.hpp"

namespace matkit::core {

// Raw 8-bit grayscale plane, used for trimap files (0/128/255) and other
// label images that must round-trip without quantization.
struct Gray8 {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;

    Gray8() = default;
    Gray8(int w, int h) : width(w), height(h), data(static_cast<size_t>(w) * h, 0) {}

    uint8_t& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    uint8_t at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
};

// PNG or JPEG by extension; 3-channel output, values scaled to [0,1].
RgbImage load_rgb(const std::string& path);

// Grayscale PNG, 8- or 16-bit; values scaled by 1/255 or 1/65535.
AlphaMatte load_alpha(const std::string& path);

// Grayscale PNG holding only 0 and 255.
BinaryMask load_mask(const std::string& path);

Gray8 load_gray8(const std::string& path);

void save_rgb(const std::string& path, const RgbImage& img);
void save_alpha(const std::string& path, const AlphaMatte& matte, int bit_depth = 16);
void save_mask(const std::string& path, const BinaryMask& mask);
void save_gray8(const std::string& path, const Gray8& img);

bool has_extension(const std::string& path, const std::string& ext);

}  // namespace matkit::core
