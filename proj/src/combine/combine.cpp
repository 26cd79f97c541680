#include "matkit/combine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace matkit::combine {

namespace {

void require_match(const ClassProbMap& glance, const AlphaMatte& focus) {
    if (glance.width != focus.width || glance.height != focus.height) {
        throw std::invalid_argument("glance/focus dimension mismatch");
    }
}

void require_channels(const ClassProbMap& glance, int c) {
    if (glance.channels != c) {
        throw std::invalid_argument("merge expects a " + std::to_string(c) + "-class glance map");
    }
}

}  // namespace

void validate(const ClassProbMap& probs) {
    if (probs.channels != 2 && probs.channels != 3) {
        throw std::invalid_argument("class map must have 2 or 3 channels");
    }
    if (probs.width < 1 || probs.height < 1 ||
        probs.data.size() != static_cast<size_t>(probs.width) * probs.height * probs.channels) {
        throw std::invalid_argument("class map dimensions inconsistent with data length");
    }
    const size_t pixels = static_cast<size_t>(probs.width) * probs.height;
    for (size_t i = 0; i < pixels; ++i) {
        float sum = 0.0f;
        for (int c = 0; c < probs.channels; ++c) {
            const float p = probs.data[i * probs.channels + c];
            if (p < 0.0f) throw std::invalid_argument("class probability below zero");
            sum += p;
        }
        if (std::fabs(sum - 1.0f) > 1e-5f) {
            throw std::invalid_argument("class probabilities do not sum to 1");
        }
    }
}

std::vector<uint8_t> argmax_labels(const ClassProbMap& probs) {
    validate(probs);
    const size_t pixels = static_cast<size_t>(probs.width) * probs.height;
    const uint8_t tie_label = probs.channels == 3 ? 1 : 0;
    std::vector<uint8_t> labels(pixels);
    for (size_t i = 0; i < pixels; ++i) {
        const float* p = probs.data.data() + i * probs.channels;
        float best = p[0];
        int best_c = 0;
        int best_count = 1;
        for (int c = 1; c < probs.channels; ++c) {
            if (p[c] > best) {
                best = p[c];
                best_c = c;
                best_count = 1;
            } else if (p[c] == best) {
                ++best_count;
            }
        }
        labels[i] = best_count > 1 ? tie_label : static_cast<uint8_t>(best_c);
    }
    return labels;
}

AlphaMatte cm_merge_tt(const ClassProbMap& glance, const AlphaMatte& focus) {
    require_match(glance, focus);
    require_channels(glance, 3);
    const std::vector<uint8_t> labels = argmax_labels(glance);
    AlphaMatte out(focus.width, focus.height);
    for (size_t i = 0; i < out.data.size(); ++i) {
        switch (labels[i]) {
            case 0: out.data[i] = 0.0f; break;
            case 2: out.data[i] = 1.0f; break;
            default: out.data[i] = core::clamp01(focus.data[i]);
        }
    }
    return out;
}

AlphaMatte cm_merge_ft(const ClassProbMap& glance, const AlphaMatte& focus) {
    require_match(glance, focus);
    require_channels(glance, 2);
    const std::vector<uint8_t> labels = argmax_labels(glance);
    AlphaMatte out(focus.width, focus.height);
    for (size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = labels[i] == 1 ? 1.0f : core::clamp01(focus.data[i]);
    }
    return out;
}

AlphaMatte cm_merge_bt(const ClassProbMap& glance, const AlphaMatte& focus) {
    require_match(glance, focus);
    require_channels(glance, 2);
    const std::vector<uint8_t> labels = argmax_labels(glance);
    AlphaMatte out(focus.width, focus.height);
    for (size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = labels[i] == 1 ? 0.0f : core::clamp01(1.0f - focus.data[i]);
    }
    return out;
}

AlphaMatte ensemble_median(const AlphaMatte& a1, const AlphaMatte& a2, const AlphaMatte& a3) {
    if (!core::same_size(a1, a2) || !core::same_size(a1, a3)) {
        throw std::invalid_argument("ensemble inputs must share dimensions");
    }
    AlphaMatte out(a1.width, a1.height);
    for (size_t i = 0; i < out.data.size(); ++i) {
        const float a = a1.data[i], b = a2.data[i], c = a3.data[i];
        out.data[i] = std::max(std::min(a, b), std::min(std::max(a, b), c));
    }
    return out;
}

AlphaMatte hybrid_replace(const AlphaMatte& initial, const BinaryMask& transition,
                          const AlphaMatte& focus_hires) {
    if (!core::same_size(initial, focus_hires) || initial.width != transition.width ||
        initial.height != transition.height) {
        throw std::invalid_argument("hybrid inputs must share dimensions");
    }
    core::require_binary(transition, "transition");
    AlphaMatte out(initial.width, initial.height);
    for (size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = transition.data[i] ? focus_hires.data[i] : initial.data[i];
    }
    return out;
}

void validate(const HybridConfig& cfg) {
    auto legal = [](int den) { return den == 2 || den == 3 || den == 4; };
    if (!legal(cfg.d1_den) || !legal(cfg.d2_den)) {
        throw std::invalid_argument("hybrid ratios must be one of 1/2, 1/3, 1/4");
    }
    if (cfg.d1() > cfg.d2()) {
        throw std::invalid_argument("hybrid requires d1 <= d2");
    }
}

}  // namespace matkit::combine
