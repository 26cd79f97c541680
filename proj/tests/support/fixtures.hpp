#pragma once

// Deterministic fixture generators shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>

#include "matkit/core/image.hpp"
#include "matkit/core/rng.hpp"

namespace fixtures {

using matkit::core::AlphaMatte;
using matkit::core::BinaryMask;
using matkit::core::RgbImage;
using matkit::core::Rng;

inline AlphaMatte random_matte(int w, int h, uint64_t seed) {
    Rng rng(seed);
    AlphaMatte m(w, h);
    for (auto& v : m.data) v = static_cast<float>(rng.next_double());
    return m;
}

inline RgbImage random_rgb(int w, int h, uint64_t seed) {
    Rng rng(seed);
    RgbImage img(w, h);
    for (auto& v : img.data) v = static_cast<float>(rng.next_double());
    return img;
}

// Matte quantized to the 8-bit grid, so PNG round trips are exact.
inline AlphaMatte random_matte_8bit(int w, int h, uint64_t seed) {
    Rng rng(seed);
    AlphaMatte m(w, h);
    for (auto& v : m.data) {
        v = static_cast<float>(rng.next_below(256)) / 255.0f;
    }
    return m;
}

inline RgbImage random_rgb_8bit(int w, int h, uint64_t seed) {
    Rng rng(seed);
    RgbImage img(w, h);
    for (auto& v : img.data) {
        v = static_cast<float>(rng.next_below(256)) / 255.0f;
    }
    return img;
}

// Vertical soft band: 0 left of `band_start`, linear ramp over `band_width`
// columns, 1 to the right. The ramp endpoints are exact 0/1 so the support
// and solid masks have clean boundaries.
inline AlphaMatte soft_band_matte(int w, int h, int band_start, int band_width) {
    AlphaMatte m(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float v;
            if (x < band_start) {
                v = 0.0f;
            } else if (x >= band_start + band_width) {
                v = 1.0f;
            } else {
                v = static_cast<float>(x - band_start + 1) / static_cast<float>(band_width + 1);
            }
            m.at(x, y) = v;
        }
    }
    return m;
}

// Hard vertical edge: 0 for x < edge, 1 for x >= edge.
inline AlphaMatte hard_edge_matte(int w, int h, int edge) {
    AlphaMatte m(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = edge; x < w; ++x) m.at(x, y) = 1.0f;
    }
    return m;
}

// Feathered disk: 1 inside radius r0, 0 outside r1, linear in between.
inline AlphaMatte disk_matte(int w, int h, float cx, float cy, float r0, float r1) {
    AlphaMatte m(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const float dx = static_cast<float>(x) - cx;
            const float dy = static_cast<float>(y) - cy;
            const float d = std::sqrt(dx * dx + dy * dy);
            float v;
            if (d <= r0) {
                v = 1.0f;
            } else if (d >= r1) {
                v = 0.0f;
            } else {
                v = (r1 - d) / (r1 - r0);
            }
            m.at(x, y) = v;
        }
    }
    return m;
}

// Smooth low-frequency image; BM3D-friendly signal for denoiser tests.
inline RgbImage smooth_rgb(int w, int h) {
    RgbImage img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const float u = static_cast<float>(x) / static_cast<float>(w);
            const float v = static_cast<float>(y) / static_cast<float>(h);
            img.at(x, y, 0) = 0.5f + 0.3f * std::sin(6.2831853f * u);
            img.at(x, y, 1) = 0.5f + 0.3f * std::cos(6.2831853f * v);
            img.at(x, y, 2) = 0.25f + 0.5f * u * v;
        }
    }
    return img;
}

// Unique scratch directory under the system temp root; removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::random_device rd;
        const auto base = std::filesystem::temp_directory_path();
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto candidate = base / (tag + "-" + std::to_string(rd()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("could not create scratch directory under " + base.string());
    }

    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

}  // namespace fixtures
