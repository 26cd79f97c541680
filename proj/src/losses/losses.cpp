#include "matkit/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "matkit/core/ops.hpp"

namespace matkit::losses {

namespace {

constexpr int kLapLevels = 5;  // four difference bands plus the residual

void require_pair(const AlphaMatte& pred, const AlphaMatte& gt) {
    if (!core::same_size(pred, gt)) {
        throw std::invalid_argument("loss inputs must share dimensions");
    }
}

BinaryMask all_ones(int w, int h) {
    BinaryMask m(w, h);
    std::fill(m.data.begin(), m.data.end(), uint8_t{1});
    return m;
}

double masked_l1(const AlphaMatte& a, const AlphaMatte& b, const AlphaMatte& weight) {
    double acc = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        if (weight.data[i] >= 0.5f) {
            acc += std::fabs(static_cast<double>(a.data[i]) - b.data[i]);
        }
    }
    return acc;
}

}  // namespace

double loss_ce(const ClassProbMap& pred, const std::vector<uint8_t>& gt_labels) {
    combine::validate(pred);
    const size_t pixels = static_cast<size_t>(pred.width) * pred.height;
    if (gt_labels.size() != pixels) {
        throw std::invalid_argument("label map size mismatch");
    }
    double acc = 0.0;
    for (size_t i = 0; i < pixels; ++i) {
        if (gt_labels[i] >= pred.channels) {
            throw std::invalid_argument("label outside class range");
        }
        const float p = pred.data[i * pred.channels + gt_labels[i]];
        acc += -std::log(std::min(std::max(static_cast<double>(p), 1e-7), 1.0));
    }
    return acc / static_cast<double>(pixels);
}

double loss_alpha(const AlphaMatte& pred, const AlphaMatte& gt, const BinaryMask& weight) {
    require_pair(pred, gt);
    if (weight.width != pred.width || weight.height != pred.height) {
        throw std::invalid_argument("weight dimensions must match the mattes");
    }
    core::require_binary(weight, "alpha loss weight");
    double num = 0.0;
    double den = 0.0;
    for (size_t i = 0; i < pred.data.size(); ++i) {
        const double w = weight.data[i];
        const double d = static_cast<double>(pred.data[i]) - gt.data[i];
        num += std::sqrt(d * d * w + kEpsilon * kEpsilon * w);
        den += w;
    }
    if (den == 0.0) {
        throw std::invalid_argument("alpha loss weight selects no pixels");
    }
    return num / den;
}

double loss_alpha(const AlphaMatte& pred, const AlphaMatte& gt) {
    return loss_alpha(pred, gt, all_ones(pred.width, pred.height));
}

double loss_lap(const AlphaMatte& pred, const AlphaMatte& gt, const BinaryMask& weight) {
    require_pair(pred, gt);
    if (weight.width != pred.width || weight.height != pred.height) {
        throw std::invalid_argument("weight dimensions must match the mattes");
    }
    core::require_binary(weight, "laplacian loss weight");
    const core::LaplacianPyramid pp = core::laplacian_pyramid(pred, kLapLevels - 1);
    const core::LaplacianPyramid pg = core::laplacian_pyramid(gt, kLapLevels - 1);
    AlphaMatte w(weight.width, weight.height);
    for (size_t i = 0; i < w.data.size(); ++i) w.data[i] = static_cast<float>(weight.data[i]);
    double acc = 0.0;
    for (size_t k = 0; k < pp.bands.size(); ++k) {
        acc += masked_l1(pp.bands[k], pg.bands[k], w);
        w = core::pyramid_reduce(w);
    }
    acc += masked_l1(pp.residual, pg.residual, w);
    return acc;
}

double loss_lap(const AlphaMatte& pred, const AlphaMatte& gt) {
    return loss_lap(pred, gt, all_ones(pred.width, pred.height));
}

double loss_comp(const AlphaMatte& pred_alpha, const AlphaMatte& gt_alpha, const RgbImage& fg,
                 const RgbImage& bg) {
    require_pair(pred_alpha, gt_alpha);
    if (fg.width != pred_alpha.width || fg.height != pred_alpha.height ||
        !core::same_size(fg, bg)) {
        throw std::invalid_argument("composition loss inputs must share dimensions");
    }
    const size_t pixels = pred_alpha.data.size();
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (size_t i = 0; i < pixels; ++i) {
            const double f = fg.data[i * 3 + c];
            const double b = bg.data[i * 3 + c];
            const double cg = gt_alpha.data[i] * f + (1.0 - gt_alpha.data[i]) * b;
            const double cp = pred_alpha.data[i] * f + (1.0 - pred_alpha.data[i]) * b;
            const double d = cg - cp;
            acc += std::sqrt(d * d + kEpsilon * kEpsilon);
        }
        total += acc / static_cast<double>(pixels);
    }
    return total / 3.0;
}

LossReport loss_total(const LossInputs& in, const LossWeights& weights) {
    if (weights.lambda1 < 0.0 || weights.lambda2 < 0.0 || weights.lambda3 < 0.0) {
        throw std::invalid_argument("loss weights must be non-negative");
    }
    LossReport r;
    r.l_ce = loss_ce(in.glance, in.gt_labels);
    r.l_alpha_t = loss_alpha(in.focus_pred, in.gt_alpha, in.transition);
    r.l_lap_t = loss_lap(in.focus_pred, in.gt_alpha, in.transition);
    r.l_fd = r.l_alpha_t + r.l_lap_t;
    r.l_alpha_full = loss_alpha(in.merged_pred, in.gt_alpha);
    r.l_lap_full = loss_lap(in.merged_pred, in.gt_alpha);
    r.l_comp = loss_comp(in.merged_pred, in.gt_alpha, in.fg, in.bg);
    r.l_cm = r.l_alpha_full + r.l_lap_full + r.l_comp;
    r.l_total = weights.lambda1 * r.l_ce + weights.lambda2 * r.l_fd + weights.lambda3 * r.l_cm;
    return r;
}

}  // namespace matkit::losses
