#pragma once

#include <string>

#include "matkit/core/image.hpp"
#include "matkit/core/io.hpp"

namespace matkit::rosta {

using core::AlphaMatte;
using core::BinaryMask;

enum class Kind { TT, FT, BT };

std::string kind_name(Kind kind);
Kind kind_from_name(const std::string& name);

// Binarization tolerance: half of one 8-bit level, so quantized 0 and 255
// map to exact background / foreground.
inline constexpr float kDelta = 1.0f / 510.0f;

// Label plane semantics by kind:
//   TT: 0 = background, 1 = transition, 2 = foreground (three classes)
//   FT: 2 = foreground mask, 1 = transition, 0 = the rest (two classes: FG / not-FG)
//   BT: 0 = background, 1 = transition, 2 = the rest (two classes: BG / not-BG)
struct RostaMask {
    Kind kind = Kind::TT;
    int kernel = 0;  // effective odd kernel actually applied
    float delta = kDelta;
    int width = 0;
    int height = 0;
    std::vector<uint8_t> labels;

    uint8_t at(int x, int y) const { return labels[static_cast<size_t>(y) * width + x]; }
    int num_classes() const { return kind == Kind::TT ? 3 : 2; }
};

RostaMask make_tt(const AlphaMatte& alpha, int k = 25);
RostaMask make_ft(const AlphaMatte& alpha, int k = 50);
RostaMask make_bt(const AlphaMatte& alpha, int k = 50);
RostaMask make(Kind kind, const AlphaMatte& alpha, int k);

BinaryMask transition_weight(const RostaMask& rosta);
BinaryMask label_mask(const RostaMask& rosta, uint8_t label);

// Trimap plane: label 0 -> 0, 1 -> 128, 2 -> 255.
core::Gray8 to_trimap(const RostaMask& rosta);
RostaMask from_trimap(const core::Gray8& trimap, Kind kind, int kernel, float delta = kDelta);

// PNG trimap plus JSON sidecar (<path>.json) recording kind, kernel, delta.
void save_rosta(const std::string& path, const RostaMask& rosta);
RostaMask load_rosta(const std::string& path);

}  // namespace matkit::rosta
