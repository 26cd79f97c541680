#pragma once

#include <cstdint>
#include <vector>

#include "matkit/core/image.hpp"

namespace matkit::combine {

using core::AlphaMatte;
using core::BinaryMask;

// Per-pixel class probabilities, C = 2 or 3. Channel meaning:
//   C=3: 0 = background, 1 = transition, 2 = foreground
//   C=2: 1 = the semantic class (FG for the FT merge, BG for the BT merge)
struct ClassProbMap {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<float> data;  // (y*width + x)*channels + c

    ClassProbMap() = default;
    ClassProbMap(int w, int h, int c)
        : width(w), height(h), channels(c), data(static_cast<size_t>(w) * h * c, 0.0f) {}

    float& at(int x, int y, int c) {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    float at(int x, int y, int c) const {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }
};

// Throws std::invalid_argument unless every pixel's probabilities are
// non-negative and sum to 1 within 1e-5, and channels is 2 or 3.
void validate(const ClassProbMap& probs);

// Argmax label per pixel; ties resolve to the transition class (C=3) or to
// class 0 (C=2), so ambiguous pixels never commit to a hard 0/1.
std::vector<uint8_t> argmax_labels(const ClassProbMap& probs);

AlphaMatte cm_merge_tt(const ClassProbMap& glance, const AlphaMatte& focus);
AlphaMatte cm_merge_ft(const ClassProbMap& glance, const AlphaMatte& focus);
AlphaMatte cm_merge_bt(const ClassProbMap& glance, const AlphaMatte& focus);

AlphaMatte ensemble_median(const AlphaMatte& a1, const AlphaMatte& a2, const AlphaMatte& a3);

AlphaMatte hybrid_replace(const AlphaMatte& initial, const BinaryMask& transition,
                          const AlphaMatte& focus_hires);

// Downsample ratios for the two hybrid passes, stored as denominators so the
// legal set {1/2, 1/3, 1/4} stays exact.
struct HybridConfig {
    int d1_den = 3;
    int d2_den = 2;

    double d1() const { return 1.0 / d1_den; }
    double d2() const { return 1.0 / d2_den; }
};

// d1, d2 in {1/2, 1/3, 1/4} and d1 <= d2.
void validate(const HybridConfig& cfg);

}  // namespace matkit::combine
