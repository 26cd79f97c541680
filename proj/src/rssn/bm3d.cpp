#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "matkit/rssn.hpp"

namespace matkit::rssn {

namespace {

constexpr int kBlock = 8;
constexpr int kStride = 4;
constexpr int kSearchRadius = 19;  // 39x39 window of candidate positions
constexpr int kMaxGroup = 16;
constexpr double kSigma = 10.0 / 255.0;
constexpr double kLambda3d = 2.7;
constexpr double kTauHard = 2500.0 / (255.0 * 255.0);    // mean squared diff per pixel
constexpr double kTauWiener = 400.0 / (255.0 * 255.0);

struct Dct8 {
    std::array<std::array<double, kBlock>, kBlock> fwd;  // orthonormal DCT-II rows
};

Dct8 make_dct8() {
    Dct8 d;
    for (int k = 0; k < kBlock; ++k) {
        const double scale = k == 0 ? std::sqrt(1.0 / kBlock) : std::sqrt(2.0 / kBlock);
        for (int n = 0; n < kBlock; ++n) {
            d.fwd[k][n] = scale * std::cos(M_PI * (2 * n + 1) * k / (2.0 * kBlock));
        }
    }
    return d;
}

const Dct8& dct8() {
    static const Dct8 d = make_dct8();
    return d;
}

using Block = std::array<double, kBlock * kBlock>;

void dct2d(const Block& in, Block& out) {
    const auto& t = dct8().fwd;
    Block tmp;
    for (int y = 0; y < kBlock; ++y) {
        for (int k = 0; k < kBlock; ++k) {
            double acc = 0.0;
            for (int n = 0; n < kBlock; ++n) acc += t[k][n] * in[y * kBlock + n];
            tmp[y * kBlock + k] = acc;
        }
    }
    for (int x = 0; x < kBlock; ++x) {
        for (int k = 0; k < kBlock; ++k) {
            double acc = 0.0;
            for (int n = 0; n < kBlock; ++n) acc += t[k][n] * tmp[n * kBlock + x];
            out[k * kBlock + x] = acc;
        }
    }
}

void idct2d(const Block& in, Block& out) {
    const auto& t = dct8().fwd;
    Block tmp;
    for (int x = 0; x < kBlock; ++x) {
        for (int n = 0; n < kBlock; ++n) {
            double acc = 0.0;
            for (int k = 0; k < kBlock; ++k) acc += t[k][n] * in[k * kBlock + x];
            tmp[n * kBlock + x] = acc;
        }
    }
    for (int y = 0; y < kBlock; ++y) {
        for (int n = 0; n < kBlock; ++n) {
            double acc = 0.0;
            for (int k = 0; k < kBlock; ++k) acc += t[k][n] * tmp[y * kBlock + k];
            out[y * kBlock + n] = acc;
        }
    }
}

// Full multi-level orthonormal Haar along the group dimension; n is a power
// of two no larger than kMaxGroup.
void haar_forward(double* v, int n) {
    double tmp[kMaxGroup];
    for (int len = n; len > 1; len /= 2) {
        const int half = len / 2;
        for (int i = 0; i < half; ++i) {
            tmp[i] = (v[2 * i] + v[2 * i + 1]) * M_SQRT1_2;
            tmp[half + i] = (v[2 * i] - v[2 * i + 1]) * M_SQRT1_2;
        }
        std::copy(tmp, tmp + len, v);
    }
}

void haar_inverse(double* v, int n) {
    double tmp[kMaxGroup];
    for (int len = 2; len <= n; len *= 2) {
        const int half = len / 2;
        for (int i = 0; i < half; ++i) {
            tmp[2 * i] = (v[i] + v[half + i]) * M_SQRT1_2;
            tmp[2 * i + 1] = (v[i] - v[half + i]) * M_SQRT1_2;
        }
        std::copy(tmp, tmp + len, v);
    }
}

std::vector<int> reference_coords(int extent) {
    std::vector<int> coords;
    for (int p = 0; p + kBlock <= extent; p += kStride) coords.push_back(p);
    if (coords.empty() || coords.back() != extent - kBlock) coords.push_back(extent - kBlock);
    return coords;
}

struct Match {
    double dist;
    int x;
    int y;
};

void extract_block(const std::vector<double>& plane, int w, int x, int y, Block& out) {
    for (int r = 0; r < kBlock; ++r) {
        const double* src = plane.data() + static_cast<size_t>(y + r) * w + x;
        std::copy(src, src + kBlock, out.begin() + r * kBlock);
    }
}

// Candidates within the search window whose per-pixel mean squared
// difference from the reference block is at most tau, reference first and
// the rest best-first. Keeping the reference in the group matters on flat
// regions: everything ties at distance zero there, and trimming the
// reference away can leave pixels with no aggregated contribution.
std::vector<Match> find_matches(const std::vector<double>& plane, int w, int h, int rx, int ry,
                                double tau) {
    std::vector<Match> matches;
    const int x0 = std::max(0, rx - kSearchRadius);
    const int x1 = std::min(w - kBlock, rx + kSearchRadius);
    const int y0 = std::max(0, ry - kSearchRadius);
    const int y1 = std::min(h - kBlock, ry + kSearchRadius);
    Block ref;
    extract_block(plane, w, rx, ry, ref);
    for (int cy = y0; cy <= y1; ++cy) {
        for (int cx = x0; cx <= x1; ++cx) {
            double acc = 0.0;
            for (int r = 0; r < kBlock; ++r) {
                const double* a = ref.data() + r * kBlock;
                const double* b = plane.data() + static_cast<size_t>(cy + r) * w + cx;
                for (int c = 0; c < kBlock; ++c) {
                    const double d = a[c] - b[c];
                    acc += d * d;
                }
            }
            const double dist = acc / (kBlock * kBlock);
            if (dist <= tau) matches.push_back({dist, cx, cy});
        }
    }
    std::sort(matches.begin(), matches.end(), [rx, ry](const Match& a, const Match& b) {
        const bool a_ref = a.x == rx && a.y == ry;
        const bool b_ref = b.x == rx && b.y == ry;
        if (a_ref != b_ref) return a_ref;
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });
    int g = 1;
    while (g * 2 <= static_cast<int>(matches.size()) && g * 2 <= kMaxGroup) g *= 2;
    matches.resize(g);
    return matches;
}

struct Accumulator {
    std::vector<double> num;
    std::vector<double> den;

    explicit Accumulator(size_t n) : num(n, 0.0), den(n, 0.0) {}

    void add(const Block& block, int w, int x, int y, double weight) {
        for (int r = 0; r < kBlock; ++r) {
            const size_t base = static_cast<size_t>(y + r) * w + x;
            for (int c = 0; c < kBlock; ++c) {
                num[base + c] += weight * block[r * kBlock + c];
                den[base + c] += weight;
            }
        }
    }

    std::vector<double> resolve() const {
        std::vector<double> out(num.size());
        for (size_t i = 0; i < num.size(); ++i) out[i] = num[i] / den[i];
        return out;
    }
};

std::vector<double> hard_stage(const std::vector<double>& noisy, int w, int h) {
    const std::vector<int> xs = reference_coords(w);
    const std::vector<int> ys = reference_coords(h);
    const double threshold = kLambda3d * kSigma;
    Accumulator acc(noisy.size());
    std::vector<Block> spectra(kMaxGroup);
    for (int ry : ys) {
        for (int rx : xs) {
            const std::vector<Match> matches = find_matches(noisy, w, h, rx, ry, kTauHard);
            const int g = static_cast<int>(matches.size());
            Block raw;
            for (int m = 0; m < g; ++m) {
                extract_block(noisy, w, matches[m].x, matches[m].y, raw);
                dct2d(raw, spectra[m]);
            }
            int retained = 0;
            double column[kMaxGroup];
            for (int i = 0; i < kBlock * kBlock; ++i) {
                for (int m = 0; m < g; ++m) column[m] = spectra[m][i];
                haar_forward(column, g);
                for (int m = 0; m < g; ++m) {
                    if (std::fabs(column[m]) < threshold) {
                        column[m] = 0.0;
                    } else {
                        ++retained;
                    }
                }
                haar_inverse(column, g);
                for (int m = 0; m < g; ++m) spectra[m][i] = column[m];
            }
            const double weight = 1.0 / (kSigma * kSigma * std::max(retained, 1));
            for (int m = 0; m < g; ++m) {
                idct2d(spectra[m], raw);
                acc.add(raw, w, matches[m].x, matches[m].y, weight);
            }
        }
    }
    return acc.resolve();
}

std::vector<double> wiener_stage(const std::vector<double>& noisy,
                                 const std::vector<double>& basic, int w, int h) {
    const std::vector<int> xs = reference_coords(w);
    const std::vector<int> ys = reference_coords(h);
    Accumulator acc(noisy.size());
    std::vector<Block> spec_basic(kMaxGroup), spec_noisy(kMaxGroup);
    for (int ry : ys) {
        for (int rx : xs) {
            const std::vector<Match> matches = find_matches(basic, w, h, rx, ry, kTauWiener);
            const int g = static_cast<int>(matches.size());
            Block raw;
            for (int m = 0; m < g; ++m) {
                extract_block(basic, w, matches[m].x, matches[m].y, raw);
                dct2d(raw, spec_basic[m]);
                extract_block(noisy, w, matches[m].x, matches[m].y, raw);
                dct2d(raw, spec_noisy[m]);
            }
            double wiener_energy = 0.0;
            double col_basic[kMaxGroup], col_noisy[kMaxGroup];
            for (int i = 0; i < kBlock * kBlock; ++i) {
                for (int m = 0; m < g; ++m) {
                    col_basic[m] = spec_basic[m][i];
                    col_noisy[m] = spec_noisy[m][i];
                }
                haar_forward(col_basic, g);
                haar_forward(col_noisy, g);
                for (int m = 0; m < g; ++m) {
                    const double b2 = col_basic[m] * col_basic[m];
                    const double shrink = b2 / (b2 + kSigma * kSigma);
                    col_noisy[m] *= shrink;
                    wiener_energy += shrink * shrink;
                }
                haar_inverse(col_noisy, g);
                for (int m = 0; m < g; ++m) spec_noisy[m][i] = col_noisy[m];
            }
            const double weight =
                wiener_energy > 0.0 ? 1.0 / (kSigma * kSigma * wiener_energy) : 1.0;
            for (int m = 0; m < g; ++m) {
                idct2d(spec_noisy[m], raw);
                acc.add(raw, w, matches[m].x, matches[m].y, weight);
            }
        }
    }
    return acc.resolve();
}

}  // namespace

RgbImage denoise(const RgbImage& image) {
    core::require_unit_range(image, "denoise input");
    if (image.width < kBlock || image.height < kBlock) return image;
    const size_t n = static_cast<size_t>(image.width) * image.height;
    RgbImage out(image.width, image.height);
    std::vector<double> plane(n);
    for (int c = 0; c < 3; ++c) {
        for (size_t i = 0; i < n; ++i) plane[i] = image.data[i * 3 + c];
        const std::vector<double> basic = hard_stage(plane, image.width, image.height);
        const std::vector<double> final_plane = wiener_stage(plane, basic, image.width, image.height);
        for (size_t i = 0; i < n; ++i) {
            out.data[i * 3 + c] = core::clamp01(static_cast<float>(final_plane[i]));
        }
    }
    return out;
}

}  // namespace matkit::rssn
