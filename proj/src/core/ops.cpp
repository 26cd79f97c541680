#include "matkit/core/ops.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace matkit::core {

namespace {

void check_kernel(int k) {
    if (k < 1 || k % 2 == 0) {
        throw std::invalid_argument("morphology kernel must be odd and >= 1");
    }
}

// Sliding min/max over clamped windows, one row or column at a time. With
// replicate borders a window that runs past the edge sees only edge values,
// so the clamped range [max(0,i-r), min(n-1,i+r)] is equivalent.
template <bool kMax>
void sliding_extreme(const uint8_t* src, uint8_t* dst, int n, size_t stride, int r) {
    std::deque<int> q;  // indices of window extrema candidates
    auto value = [&](int i) { return src[static_cast<size_t>(i) * stride]; };
    auto better = [](uint8_t a, uint8_t b) { return kMax ? a >= b : a <= b; };
    int right = -1;
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - r);
        const int hi = std::min(n - 1, i + r);
        while (right < hi) {
            ++right;
            while (!q.empty() && better(value(right), value(q.back()))) q.pop_back();
            q.push_back(right);
        }
        while (q.front() < lo) q.pop_front();
        dst[static_cast<size_t>(i) * stride] = value(q.front());
    }
}

template <bool kMax>
BinaryMask morph(const BinaryMask& mask, int k) {
    check_kernel(k);
    require_binary(mask, "morphology input");
    const int r = k / 2;
    const int w = mask.width, h = mask.height;
    BinaryMask tmp(w, h), out(w, h);
    for (int y = 0; y < h; ++y) {
        sliding_extreme<kMax>(mask.data.data() + static_cast<size_t>(y) * w,
                              tmp.data.data() + static_cast<size_t>(y) * w, w, 1, r);
    }
    for (int x = 0; x < w; ++x) {
        sliding_extreme<kMax>(tmp.data.data() + x, out.data.data() + x, h, w, r);
    }
    return out;
}

float sample_bilinear(const float* data, int w, int h, size_t channels, size_t c, float sx,
                      float sy) {
    sx = std::min(std::max(sx, 0.0f), static_cast<float>(w - 1));
    sy = std::min(std::max(sy, 0.0f), static_cast<float>(h - 1));
    const int x0 = static_cast<int>(sx);
    const int y0 = static_cast<int>(sy);
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const float fx = sx - static_cast<float>(x0);
    const float fy = sy - static_cast<float>(y0);
    auto px = [&](int x, int y) {
        return data[(static_cast<size_t>(y) * w + x) * channels + c];
    };
    const float top = px(x0, y0) * (1.0f - fx) + px(x1, y0) * fx;
    const float bot = px(x0, y1) * (1.0f - fx) + px(x1, y1) * fx;
    return top * (1.0f - fy) + bot * fy;
}

void resize_plane(const float* src, int sw, int sh, float* dst, int dw, int dh, size_t channels) {
    const float rx = static_cast<float>(sw) / static_cast<float>(dw);
    const float ry = static_cast<float>(sh) / static_cast<float>(dh);
    for (int y = 0; y < dh; ++y) {
        const float sy = (static_cast<float>(y) + 0.5f) * ry - 0.5f;
        for (int x = 0; x < dw; ++x) {
            const float sx = (static_cast<float>(x) + 0.5f) * rx - 0.5f;
            for (size_t c = 0; c < channels; ++c) {
                float v = sample_bilinear(src, sw, sh, channels, c, sx, sy);
                dst[(static_cast<size_t>(y) * dw + x) * channels + c] = clamp01(v);
            }
        }
    }
}

void check_target(int w, int h) {
    if (w < 1 || h < 1) throw std::invalid_argument("resize target dimensions must be >= 1");
}

int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

}  // namespace

BinaryMask erode(const BinaryMask& mask, int k) { return morph<false>(mask, k); }
BinaryMask dilate(const BinaryMask& mask, int k) { return morph<true>(mask, k); }

BinaryMask logical_not(const BinaryMask& mask) {
    BinaryMask out(mask.width, mask.height);
    for (size_t i = 0; i < mask.data.size(); ++i) out.data[i] = mask.data[i] ? 0 : 1;
    return out;
}

BinaryMask logical_and(const BinaryMask& a, const BinaryMask& b) {
    if (a.width != b.width || a.height != b.height) {
        throw std::invalid_argument("logical_and: size mismatch");
    }
    BinaryMask out(a.width, a.height);
    for (size_t i = 0; i < a.data.size(); ++i) out.data[i] = (a.data[i] && b.data[i]) ? 1 : 0;
    return out;
}

BinaryMask logical_and_not(const BinaryMask& a, const BinaryMask& b) {
    if (a.width != b.width || a.height != b.height) {
        throw std::invalid_argument("logical_and_not: size mismatch");
    }
    BinaryMask out(a.width, a.height);
    for (size_t i = 0; i < a.data.size(); ++i) out.data[i] = (a.data[i] && !b.data[i]) ? 1 : 0;
    return out;
}

RgbImage resize(const RgbImage& img, int target_w, int target_h) {
    check_target(target_w, target_h);
    if (target_w == img.width && target_h == img.height) return img;
    RgbImage out(target_w, target_h);
    resize_plane(img.data.data(), img.width, img.height, out.data.data(), target_w, target_h, 3);
    return out;
}

AlphaMatte resize(const AlphaMatte& img, int target_w, int target_h) {
    check_target(target_w, target_h);
    if (target_w == img.width && target_h == img.height) return img;
    AlphaMatte out(target_w, target_h);
    resize_plane(img.data.data(), img.width, img.height, out.data.data(), target_w, target_h, 1);
    return out;
}

AlphaMatte conv2d(const AlphaMatte& img, const std::vector<float>& kernel, int kw, int kh) {
    if (kw < 1 || kh < 1 || kw % 2 == 0 || kh % 2 == 0 ||
        kernel.size() != static_cast<size_t>(kw) * kh) {
        throw std::invalid_argument("conv2d: kernel must be odd-sized");
    }
    const int rx = kw / 2, ry = kh / 2;
    const int w = img.width, h = img.height;
    AlphaMatte out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int ky = 0; ky < kh; ++ky) {
                const int sy = clampi(y + ky - ry, 0, h - 1);
                for (int kx = 0; kx < kw; ++kx) {
                    const int sx = clampi(x + kx - rx, 0, w - 1);
                    acc += static_cast<double>(kernel[static_cast<size_t>(ky) * kw + kx]) *
                           img.at(sx, sy);
                }
            }
            out.at(x, y) = static_cast<float>(acc);
        }
    }
    return out;
}

namespace {

// 5-tap binomial smoothing along one axis, replicate border.
void binomial_pass(const float* src, float* dst, int n, size_t stride) {
    static const float kTap[5] = {1.0f / 16, 4.0f / 16, 6.0f / 16, 4.0f / 16, 1.0f / 16};
    for (int i = 0; i < n; ++i) {
        float acc = 0.0f;
        for (int t = -2; t <= 2; ++t) {
            const int j = clampi(i + t, 0, n - 1);
            acc += kTap[t + 2] * src[static_cast<size_t>(j) * stride];
        }
        dst[static_cast<size_t>(i) * stride] = acc;
    }
}

}  // namespace

AlphaMatte pyramid_reduce(const AlphaMatte& img) {
    const int w = img.width, h = img.height;
    AlphaMatte rows(w, h), smooth(w, h);
    for (int y = 0; y < h; ++y) {
        binomial_pass(img.data.data() + static_cast<size_t>(y) * w,
                      rows.data.data() + static_cast<size_t>(y) * w, w, 1);
    }
    for (int x = 0; x < w; ++x) {
        binomial_pass(rows.data.data() + x, smooth.data.data() + x, h, w);
    }
    const int ow = (w + 1) / 2, oh = (h + 1) / 2;
    AlphaMatte out(ow, oh);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            out.at(x, y) = smooth.at(x * 2, y * 2);
        }
    }
    return out;
}

AlphaMatte pyramid_expand(const AlphaMatte& img, int target_w, int target_h) {
    return resize(img, target_w, target_h);
}

LaplacianPyramid laplacian_pyramid(const AlphaMatte& img, int levels) {
    if (levels < 1) throw std::invalid_argument("laplacian_pyramid: levels must be >= 1");
    const int min_side = 1 << (levels - 1);
    if (img.width < min_side || img.height < min_side) {
        throw std::invalid_argument("laplacian_pyramid: image too small for requested levels");
    }
    LaplacianPyramid pyr;
    AlphaMatte current = img;
    for (int k = 0; k < levels; ++k) {
        AlphaMatte low = pyramid_reduce(current);
        AlphaMatte up = pyramid_expand(low, current.width, current.height);
        AlphaMatte band(current.width, current.height);
        for (size_t i = 0; i < band.data.size(); ++i) {
            band.data[i] = current.data[i] - up.data[i];
        }
        pyr.bands.push_back(std::move(band));
        current = std::move(low);
    }
    pyr.residual = std::move(current);
    return pyr;
}

AlphaMatte laplacian_reconstruct(const LaplacianPyramid& pyr) {
    AlphaMatte acc = pyr.residual;
    for (size_t k = pyr.bands.size(); k-- > 0;) {
        const AlphaMatte& band = pyr.bands[k];
        AlphaMatte up = pyramid_expand(acc, band.width, band.height);
        for (size_t i = 0; i < up.data.size(); ++i) up.data[i] += band.data[i];
        acc = std::move(up);
    }
    return acc;
}

ConnectedComponents connected_components(const BinaryMask& mask) {
    const int w = mask.width, h = mask.height;
    ConnectedComponents cc;
    cc.labels.assign(static_cast<size_t>(w) * h, 0);
    std::vector<int> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t idx = static_cast<size_t>(y) * w + x;
            if (!mask.data[idx] || cc.labels[idx] != 0) continue;
            const int32_t label = ++cc.count;
            size_t size = 0;
            stack.push_back(static_cast<int>(idx));
            cc.labels[idx] = label;
            while (!stack.empty()) {
                const int p = stack.back();
                stack.pop_back();
                ++size;
                const int py = p / w, px = p % w;
                const int neighbors[4][2] = {{px - 1, py}, {px + 1, py}, {px, py - 1}, {px, py + 1}};
                for (const auto& n : neighbors) {
                    if (n[0] < 0 || n[0] >= w || n[1] < 0 || n[1] >= h) continue;
                    const size_t ni = static_cast<size_t>(n[1]) * w + n[0];
                    if (mask.data[ni] && cc.labels[ni] == 0) {
                        cc.labels[ni] = label;
                        stack.push_back(static_cast<int>(ni));
                    }
                }
            }
            cc.sizes.push_back(size);
        }
    }
    return cc;
}

}  // namespace matkit::core
