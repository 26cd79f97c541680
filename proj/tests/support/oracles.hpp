#pragma once

// Reference implementations written as plain loops, independent of the
// library's code paths. Where a tolerance is tight enough that float rounding
// matters (gradient kernels, pyramid arithmetic) the oracle keeps the same
// storage precision as the library while deriving indexing, boundaries and
// accumulation from scratch.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "matkit/combine.hpp"
#include "matkit/core/image.hpp"

namespace oracles {

using matkit::combine::ClassProbMap;
using matkit::core::AlphaMatte;
using matkit::core::BinaryMask;
using matkit::core::RgbImage;

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

// ---- basic difference metrics ----

inline double sad(const AlphaMatte& pred, const AlphaMatte& gt) {
    double acc = 0.0;
    for (int y = 0; y < pred.height; ++y) {
        for (int x = 0; x < pred.width; ++x) {
            acc += std::fabs(static_cast<double>(pred.at(x, y)) - gt.at(x, y));
        }
    }
    return acc / 1000.0;
}

inline double mse(const AlphaMatte& pred, const AlphaMatte& gt) {
    double acc = 0.0;
    for (int y = 0; y < pred.height; ++y) {
        for (int x = 0; x < pred.width; ++x) {
            const double d = static_cast<double>(pred.at(x, y)) - gt.at(x, y);
            acc += d * d;
        }
    }
    return acc / (static_cast<double>(pred.width) * pred.height);
}

inline double mad(const AlphaMatte& pred, const AlphaMatte& gt) {
    double acc = 0.0;
    for (int y = 0; y < pred.height; ++y) {
        for (int x = 0; x < pred.width; ++x) {
            acc += std::fabs(static_cast<double>(pred.at(x, y)) - gt.at(x, y));
        }
    }
    return acc / (static_cast<double>(pred.width) * pred.height);
}

struct RegionSums {
    double tran = 0.0;
    double fg = 0.0;
    double bg = 0.0;
};

inline RegionSums region_sad(const AlphaMatte& pred, const AlphaMatte& gt,
                             const std::vector<uint8_t>& labels) {
    RegionSums r;
    for (size_t i = 0; i < pred.data.size(); ++i) {
        const double d = std::fabs(static_cast<double>(pred.data[i]) - gt.data[i]);
        if (labels[i] == 0) {
            r.bg += d;
        } else if (labels[i] == 1) {
            r.tran += d;
        } else {
            r.fg += d;
        }
    }
    r.tran /= 1000.0;
    r.fg /= 1000.0;
    r.bg /= 1000.0;
    return r;
}

// ---- gradient error ----

struct GradFilter {
    int radius = 0;
    std::vector<float> horiz;  // derivative along x
    std::vector<float> vert;   // derivative along y
};

inline GradFilter grad_filter() {
    const double sigma = 1.4;
    const int radius = static_cast<int>(3.0 * sigma);
    const int size = 2 * radius + 1;
    GradFilter f;
    f.radius = radius;
    f.horiz.resize(static_cast<size_t>(size) * size);
    double norm_sq = 0.0;
    for (int y = 0; y < size; ++y) {
        const double uy = y - radius;
        const double gy = std::exp(-uy * uy / (2.0 * sigma * sigma)) /
                          (sigma * std::sqrt(2.0 * 3.14159265358979323846));
        for (int x = 0; x < size; ++x) {
            const double ux = x - radius;
            const double gx = std::exp(-ux * ux / (2.0 * sigma * sigma)) /
                              (sigma * std::sqrt(2.0 * 3.14159265358979323846));
            const double dgx = -ux * gx / (sigma * sigma);
            const double v = gy * dgx;
            f.horiz[static_cast<size_t>(y) * size + x] = static_cast<float>(v);
            norm_sq += v * v;
        }
    }
    const float norm = static_cast<float>(std::sqrt(norm_sq));
    for (auto& v : f.horiz) v /= norm;
    f.vert.resize(f.horiz.size());
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            f.vert[static_cast<size_t>(y) * size + x] =
                f.horiz[static_cast<size_t>(x) * size + y];
        }
    }
    return f;
}

inline std::vector<float> correlate(const AlphaMatte& img, const std::vector<float>& kernel,
                                    int radius) {
    const int size = 2 * radius + 1;
    std::vector<float> out(img.data.size());
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int ky = 0; ky < size; ++ky) {
                const int sy = clampi(y + ky - radius, 0, img.height - 1);
                for (int kx = 0; kx < size; ++kx) {
                    const int sx = clampi(x + kx - radius, 0, img.width - 1);
                    acc += static_cast<double>(kernel[static_cast<size_t>(ky) * size + kx]) *
                           img.at(sx, sy);
                }
            }
            out[static_cast<size_t>(y) * img.width + x] = static_cast<float>(acc);
        }
    }
    return out;
}

inline double grad_error(const AlphaMatte& pred, const AlphaMatte& gt) {
    const GradFilter f = grad_filter();
    const std::vector<float> px = correlate(pred, f.horiz, f.radius);
    const std::vector<float> py = correlate(pred, f.vert, f.radius);
    const std::vector<float> gx = correlate(gt, f.horiz, f.radius);
    const std::vector<float> gy = correlate(gt, f.vert, f.radius);
    double acc = 0.0;
    for (size_t i = 0; i < px.size(); ++i) {
        const double mp = std::sqrt(static_cast<double>(px[i]) * px[i] +
                                    static_cast<double>(py[i]) * py[i]);
        const double mg = std::sqrt(static_cast<double>(gx[i]) * gx[i] +
                                    static_cast<double>(gy[i]) * gy[i]);
        const double d = mp - mg;
        acc += d * d;
    }
    return acc / 1000.0;
}

// ---- connectivity error ----

// Largest 4-connected region of `in`; ties keep the component discovered
// first in row-major order. BFS, unlike the library's DFS labeling.
inline std::vector<uint8_t> largest_region(const std::vector<uint8_t>& in, int w, int h) {
    std::vector<int> comp(in.size(), -1);
    std::vector<size_t> counts;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t start = static_cast<size_t>(y) * w + x;
            if (!in[start] || comp[start] >= 0) continue;
            const int id = static_cast<int>(counts.size());
            size_t n = 0;
            std::queue<std::pair<int, int>> q;
            q.push({x, y});
            comp[start] = id;
            while (!q.empty()) {
                const auto [cx, cy] = q.front();
                q.pop();
                ++n;
                const int nx[4] = {cx - 1, cx + 1, cx, cx};
                const int ny[4] = {cy, cy, cy - 1, cy + 1};
                for (int t = 0; t < 4; ++t) {
                    if (nx[t] < 0 || nx[t] >= w || ny[t] < 0 || ny[t] >= h) continue;
                    const size_t ni = static_cast<size_t>(ny[t]) * w + nx[t];
                    if (in[ni] && comp[ni] < 0) {
                        comp[ni] = id;
                        q.push({nx[t], ny[t]});
                    }
                }
            }
            counts.push_back(n);
        }
    }
    std::vector<uint8_t> out(in.size(), 0);
    if (counts.empty()) return out;
    int best = 0;
    for (int id = 1; id < static_cast<int>(counts.size()); ++id) {
        if (counts[id] > counts[best]) best = id;
    }
    for (size_t i = 0; i < in.size(); ++i) out[i] = comp[i] == best ? 1 : 0;
    return out;
}

inline double conn_error(const AlphaMatte& pred, const AlphaMatte& gt) {
    const int w = pred.width, h = pred.height;
    const size_t n = pred.data.size();
    std::vector<float> l(n, 0.0f);
    for (int k = 1; k <= 10; ++k) {
        const float t = static_cast<float>(k) / 10.0f;
        std::vector<uint8_t> joint(n);
        for (size_t i = 0; i < n; ++i) {
            joint[i] = (pred.data[i] >= t && gt.data[i] >= t) ? 1 : 0;
        }
        const std::vector<uint8_t> omega = largest_region(joint, w, h);
        for (size_t i = 0; i < n; ++i) {
            if (omega[i]) l[i] = t;
        }
    }
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dp = static_cast<double>(pred.data[i]) - l[i];
        const double dg = static_cast<double>(gt.data[i]) - l[i];
        const double phi_p = dp >= 0.15 ? 1.0 - dp : 1.0;
        const double phi_g = dg >= 0.15 ? 1.0 - dg : 1.0;
        acc += std::fabs(phi_p - phi_g);
    }
    return acc / 1000.0;
}

// ---- losses ----

inline double loss_ce(const ClassProbMap& pred, const std::vector<uint8_t>& labels) {
    const size_t pixels = static_cast<size_t>(pred.width) * pred.height;
    double acc = 0.0;
    for (size_t i = 0; i < pixels; ++i) {
        double p = pred.data[i * pred.channels + labels[i]];
        if (p < 1e-7) p = 1e-7;
        if (p > 1.0) p = 1.0;
        acc -= std::log(p);
    }
    return acc / static_cast<double>(pixels);
}

inline double loss_alpha(const AlphaMatte& pred, const AlphaMatte& gt,
                         const std::vector<uint8_t>& weight) {
    const double eps = 1e-6;
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < pred.data.size(); ++i) {
        const double w = weight[i];
        const double d = static_cast<double>(pred.data[i]) - gt.data[i];
        num += std::sqrt(d * d * w + eps * eps * w);
        den += w;
    }
    return num / den;
}

inline double loss_comp(const AlphaMatte& pred, const AlphaMatte& gt, const RgbImage& fg,
                        const RgbImage& bg) {
    const double eps = 1e-6;
    const size_t pixels = pred.data.size();
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (size_t i = 0; i < pixels; ++i) {
            const double ap = pred.data[i], ag = gt.data[i];
            const double f = fg.data[i * 3 + c], b = bg.data[i * 3 + c];
            const double d = (ag * f + (1.0 - ag) * b) - (ap * f + (1.0 - ap) * b);
            acc += std::sqrt(d * d + eps * eps);
        }
        total += acc / static_cast<double>(pixels);
    }
    return total / 3.0;
}

// Pyramid pieces for the Laplacian loss oracle. Same float storage as the
// library (5-tap binomial, even-index subsampling, half-pixel bilinear
// expansion with clamped output) with independently written loops.

struct Plane {
    int w = 0;
    int h = 0;
    std::vector<float> v;
};

inline Plane plane_of(const AlphaMatte& m) {
    return Plane{m.width, m.height, m.data};
}

inline Plane reduce_once(const Plane& p) {
    static const float tap[5] = {1.0f / 16, 4.0f / 16, 6.0f / 16, 4.0f / 16, 1.0f / 16};
    Plane rows{p.w, p.h, std::vector<float>(p.v.size())};
    for (int y = 0; y < p.h; ++y) {
        for (int x = 0; x < p.w; ++x) {
            float acc = 0.0f;
            for (int t = -2; t <= 2; ++t) {
                acc += tap[t + 2] * p.v[static_cast<size_t>(y) * p.w + clampi(x + t, 0, p.w - 1)];
            }
            rows.v[static_cast<size_t>(y) * p.w + x] = acc;
        }
    }
    Plane smooth{p.w, p.h, std::vector<float>(p.v.size())};
    for (int y = 0; y < p.h; ++y) {
        for (int x = 0; x < p.w; ++x) {
            float acc = 0.0f;
            for (int t = -2; t <= 2; ++t) {
                acc += tap[t + 2] * rows.v[static_cast<size_t>(clampi(y + t, 0, p.h - 1)) * p.w + x];
            }
            smooth.v[static_cast<size_t>(y) * p.w + x] = acc;
        }
    }
    Plane out{(p.w + 1) / 2, (p.h + 1) / 2, {}};
    out.v.resize(static_cast<size_t>(out.w) * out.h);
    for (int y = 0; y < out.h; ++y) {
        for (int x = 0; x < out.w; ++x) {
            out.v[static_cast<size_t>(y) * out.w + x] =
                smooth.v[static_cast<size_t>(y) * 2 * p.w + x * 2];
        }
    }
    return out;
}

inline Plane expand_to(const Plane& p, int tw, int th) {
    if (tw == p.w && th == p.h) return p;
    Plane out{tw, th, std::vector<float>(static_cast<size_t>(tw) * th)};
    const float rx = static_cast<float>(p.w) / static_cast<float>(tw);
    const float ry = static_cast<float>(p.h) / static_cast<float>(th);
    for (int y = 0; y < th; ++y) {
        float sy = (static_cast<float>(y) + 0.5f) * ry - 0.5f;
        sy = std::min(std::max(sy, 0.0f), static_cast<float>(p.h - 1));
        const int y0 = static_cast<int>(sy);
        const int y1 = std::min(y0 + 1, p.h - 1);
        const float fy = sy - static_cast<float>(y0);
        for (int x = 0; x < tw; ++x) {
            float sx = (static_cast<float>(x) + 0.5f) * rx - 0.5f;
            sx = std::min(std::max(sx, 0.0f), static_cast<float>(p.w - 1));
            const int x0 = static_cast<int>(sx);
            const int x1 = std::min(x0 + 1, p.w - 1);
            const float fx = sx - static_cast<float>(x0);
            const float top = p.v[static_cast<size_t>(y0) * p.w + x0] * (1.0f - fx) +
                              p.v[static_cast<size_t>(y0) * p.w + x1] * fx;
            const float bot = p.v[static_cast<size_t>(y1) * p.w + x0] * (1.0f - fx) +
                              p.v[static_cast<size_t>(y1) * p.w + x1] * fx;
            float v = top * (1.0f - fy) + bot * fy;
            v = std::min(std::max(v, 0.0f), 1.0f);
            out.v[static_cast<size_t>(y) * tw + x] = v;
        }
    }
    return out;
}

inline double loss_lap(const AlphaMatte& pred, const AlphaMatte& gt,
                       const std::vector<uint8_t>& weight) {
    Plane cp = plane_of(pred);
    Plane cg = plane_of(gt);
    Plane w{pred.width, pred.height, std::vector<float>(weight.size())};
    for (size_t i = 0; i < weight.size(); ++i) w.v[i] = static_cast<float>(weight[i]);
    double acc = 0.0;
    for (int level = 0; level < 4; ++level) {
        const Plane lp = reduce_once(cp);
        const Plane lg = reduce_once(cg);
        const Plane up_p = expand_to(lp, cp.w, cp.h);
        const Plane up_g = expand_to(lg, cg.w, cg.h);
        for (size_t i = 0; i < cp.v.size(); ++i) {
            if (w.v[i] >= 0.5f) {
                const float bp = cp.v[i] - up_p.v[i];
                const float bg_band = cg.v[i] - up_g.v[i];
                acc += std::fabs(static_cast<double>(bp) - bg_band);
            }
        }
        cp = lp;
        cg = lg;
        w = reduce_once(w);
    }
    for (size_t i = 0; i < cp.v.size(); ++i) {
        if (w.v[i] >= 0.5f) {
            acc += std::fabs(static_cast<double>(cp.v[i]) - cg.v[i]);
        }
    }
    return acc;
}

// ---- combiners ----

inline int argmax_class(const float* p, int channels) {
    int best = 0;
    int best_count = 1;
    for (int c = 1; c < channels; ++c) {
        if (p[c] > p[best]) {
            best = c;
            best_count = 1;
        } else if (p[c] == p[best]) {
            ++best_count;
        }
    }
    if (best_count > 1) return channels == 3 ? 1 : 0;
    return best;
}

inline float clampf(float v) { return v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v); }

inline AlphaMatte merge_tt(const ClassProbMap& glance, const AlphaMatte& focus) {
    AlphaMatte out(focus.width, focus.height);
    for (size_t i = 0; i < out.data.size(); ++i) {
        const int c = argmax_class(glance.data.data() + i * 3, 3);
        out.data[i] = c == 0 ? 0.0f : (c == 2 ? 1.0f : clampf(focus.data[i]));
    }
    return out;
}

inline AlphaMatte merge_ft(const ClassProbMap& glance, const AlphaMatte& focus) {
    AlphaMatte out(focus.width, focus.height);
    for (size_t i = 0; i < out.data.size(); ++i) {
        const int c = argmax_class(glance.data.data() + i * 2, 2);
        out.data[i] = c == 1 ? 1.0f : clampf(focus.data[i]);
    }
    return out;
}

inline AlphaMatte merge_bt(const ClassProbMap& glance, const AlphaMatte& focus) {
    AlphaMatte out(focus.width, focus.height);
    for (size_t i = 0; i < out.data.size(); ++i) {
        const int c = argmax_class(glance.data.data() + i * 2, 2);
        out.data[i] = c == 1 ? 0.0f : clampf(1.0f - focus.data[i]);
    }
    return out;
}

inline AlphaMatte median3(const AlphaMatte& a, const AlphaMatte& b, const AlphaMatte& c) {
    AlphaMatte out(a.width, a.height);
    for (size_t i = 0; i < out.data.size(); ++i) {
        float v[3] = {a.data[i], b.data[i], c.data[i]};
        std::sort(v, v + 3);
        out.data[i] = v[1];
    }
    return out;
}

inline AlphaMatte hybrid_select(const AlphaMatte& initial, const BinaryMask& transition,
                                const AlphaMatte& focus) {
    AlphaMatte out(initial.width, initial.height);
    for (size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = transition.data[i] ? focus.data[i] : initial.data[i];
    }
    return out;
}

// ---- box mean ----

inline RgbImage box_mean(const RgbImage& img, int r) {
    const int lo = r / 2;
    const int hi = r - 1 - lo;
    RgbImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int dy = -lo; dy <= hi; ++dy) {
                    const int sy = clampi(y + dy, 0, img.height - 1);
                    for (int dx = -lo; dx <= hi; ++dx) {
                        const int sx = clampi(x + dx, 0, img.width - 1);
                        acc += img.at(sx, sy, c);
                    }
                }
                out.at(x, y, c) = static_cast<float>(acc / (static_cast<double>(r) * r));
            }
        }
    }
    return out;
}

}  // namespace oracles
