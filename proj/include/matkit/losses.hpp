#pragma once

#include <cstdint>
#include <vector>

#include "matkit/combine.hpp"
#include "matkit/core/image.hpp"

namespace matkit::losses {

using combine::ClassProbMap;
using core::AlphaMatte;
using core::BinaryMask;
using core::RgbImage;

inline constexpr double kEpsilon = 1e-6;

struct LossWeights {
    double lambda1 = 0.25;
    double lambda2 = 0.25;
    double lambda3 = 0.25;
};

struct LossReport {
    double l_ce = 0.0;
    double l_alpha_t = 0.0;
    double l_lap_t = 0.0;
    double l_fd = 0.0;
    double l_alpha_full = 0.0;
    double l_lap_full = 0.0;
    double l_comp = 0.0;
    double l_cm = 0.0;
    double l_total = 0.0;
    double epsilon = kEpsilon;
};

// Per-pixel cross entropy against hard labels, probabilities clamped to
// [1e-7, 1], averaged over pixels.
double loss_ce(const ClassProbMap& pred, const std::vector<uint8_t>& gt_labels);

// Charbonnier alpha loss restricted to `weight`; the unweighted overloads
// use an implicit all-ones weight.
double loss_alpha(const AlphaMatte& pred, const AlphaMatte& gt, const BinaryMask& weight);
double loss_alpha(const AlphaMatte& pred, const AlphaMatte& gt);

// L1 distance between five Laplacian pyramid levels (four difference bands
// plus the low-pass residual), each masked by the weight downsampled through
// the same reduce operator and thresholded at 0.5.
double loss_lap(const AlphaMatte& pred, const AlphaMatte& gt, const BinaryMask& weight);
double loss_lap(const AlphaMatte& pred, const AlphaMatte& gt);

double loss_comp(const AlphaMatte& pred_alpha, const AlphaMatte& gt_alpha, const RgbImage& fg,
                 const RgbImage& bg);

struct LossInputs {
    ClassProbMap glance;             // predicted class probabilities
    std::vector<uint8_t> gt_labels;  // hard labels matching glance channels
    AlphaMatte focus_pred;           // detail prediction
    AlphaMatte merged_pred;          // collaborative merge output
    AlphaMatte gt_alpha;
    BinaryMask transition;           // transition indicator
    RgbImage fg;
    RgbImage bg;
};

LossReport loss_total(const LossInputs& in, const LossWeights& weights = {});

}  // namespace matkit::losses
