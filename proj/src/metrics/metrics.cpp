#include "matkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "matkit/core/ops.hpp"

namespace matkit::metrics {

namespace {

void require_pair(const AlphaMatte& pred, const AlphaMatte& gt) {
    if (!core::same_size(pred, gt)) {
        throw std::invalid_argument("metric inputs must share dimensions");
    }
}

// First-order Gaussian derivative kernels after the public matting benchmark:
// sigma 1.4, radius 4 (3 sigma truncation), 2D separable products, each 2D
// kernel scaled to unit L2 norm.
struct GradKernels {
    int radius;
    std::vector<float> dx;  // gauss(y) * dgauss(x)
    std::vector<float> dy;  // dgauss(y) * gauss(x)
};

GradKernels make_grad_kernels() {
    const double sigma = 1.4;
    const int radius = static_cast<int>(3.0 * sigma);
    const int size = 2 * radius + 1;
    std::vector<double> g(size), dg(size);
    for (int i = 0; i < size; ++i) {
        const double u = i - radius;
        g[i] = std::exp(-u * u / (2.0 * sigma * sigma)) / (sigma * std::sqrt(2.0 * M_PI));
        dg[i] = -u * g[i] / (sigma * sigma);
    }
    GradKernels k;
    k.radius = radius;
    k.dx.resize(static_cast<size_t>(size) * size);
    k.dy.resize(static_cast<size_t>(size) * size);
    double norm_sq = 0.0;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double v = g[y] * dg[x];
            k.dx[static_cast<size_t>(y) * size + x] = static_cast<float>(v);
            norm_sq += v * v;
        }
    }
    const auto norm = static_cast<float>(std::sqrt(norm_sq));
    for (auto& v : k.dx) v /= norm;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            k.dy[static_cast<size_t>(y) * size + x] = k.dx[static_cast<size_t>(x) * size + y];
        }
    }
    return k;
}

std::vector<double> grad_magnitude(const AlphaMatte& img, const GradKernels& k) {
    const int size = 2 * k.radius + 1;
    AlphaMatte gx = core::conv2d(img, k.dx, size, size);
    AlphaMatte gy = core::conv2d(img, k.dy, size, size);
    std::vector<double> mag(img.data.size());
    for (size_t i = 0; i < mag.size(); ++i) {
        const double x = gx.data[i], y = gy.data[i];
        mag[i] = std::sqrt(x * x + y * y);
    }
    return mag;
}

}  // namespace

double sad(const AlphaMatte& pred, const AlphaMatte& gt) {
    require_pair(pred, gt);
    double acc = 0.0;
    for (size_t i = 0; i < pred.data.size(); ++i) {
        acc += std::fabs(static_cast<double>(pred.data[i]) - gt.data[i]);
    }
    return acc / 1000.0;
}

double mse(const AlphaMatte& pred, const AlphaMatte& gt) {
    require_pair(pred, gt);
    double acc = 0.0;
    for (size_t i = 0; i < pred.data.size(); ++i) {
        const double d = static_cast<double>(pred.data[i]) - gt.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pred.data.size());
}

double mad(const AlphaMatte& pred, const AlphaMatte& gt) {
    require_pair(pred, gt);
    double acc = 0.0;
    for (size_t i = 0; i < pred.data.size(); ++i) {
        acc += std::fabs(static_cast<double>(pred.data[i]) - gt.data[i]);
    }
    return acc / static_cast<double>(pred.data.size());
}

RegionSad region_sad(const AlphaMatte& pred, const AlphaMatte& gt,
                     const rosta::RostaMask& regions) {
    require_pair(pred, gt);
    if (regions.kind != rosta::Kind::TT) {
        throw std::invalid_argument("region_sad requires a TT representation");
    }
    if (regions.width != pred.width || regions.height != pred.height) {
        throw std::invalid_argument("region map dimensions must match the mattes");
    }
    RegionSad out;
    for (size_t i = 0; i < pred.data.size(); ++i) {
        const double d = std::fabs(static_cast<double>(pred.data[i]) - gt.data[i]);
        switch (regions.labels[i]) {
            case 0: out.bg += d; break;
            case 1: out.tran += d; break;
            default: out.fg += d;
        }
    }
    out.tran /= 1000.0;
    out.fg /= 1000.0;
    out.bg /= 1000.0;
    return out;
}

double grad_error(const AlphaMatte& pred, const AlphaMatte& gt) {
    require_pair(pred, gt);
    static const GradKernels kernels = make_grad_kernels();
    const std::vector<double> mp = grad_magnitude(pred, kernels);
    const std::vector<double> mg = grad_magnitude(gt, kernels);
    double acc = 0.0;
    for (size_t i = 0; i < mp.size(); ++i) {
        const double d = mp[i] - mg[i];
        acc += d * d;
    }
    return acc / 1000.0;
}

double conn_error(const AlphaMatte& pred, const AlphaMatte& gt) {
    require_pair(pred, gt);
    const size_t n = pred.data.size();
    // l[i] = largest threshold whose jointly-binarized largest component
    // contains pixel i; threshold 0 admits every pixel.
    std::vector<float> l(n, 0.0f);
    core::BinaryMask mask(pred.width, pred.height);
    for (int k = 1; k <= 10; ++k) {
        const float t = static_cast<float>(k) / 10.0f;
        for (size_t i = 0; i < n; ++i) {
            mask.data[i] = (pred.data[i] >= t && gt.data[i] >= t) ? 1 : 0;
        }
        const core::ConnectedComponents cc = core::connected_components(mask);
        if (cc.count == 0) continue;
        int32_t best = 1;
        for (int32_t c = 2; c <= cc.count; ++c) {
            if (cc.sizes[c - 1] > cc.sizes[best - 1]) best = c;
        }
        for (size_t i = 0; i < n; ++i) {
            if (cc.labels[i] == best) l[i] = t;
        }
    }
    const double theta = 0.15;
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dp = static_cast<double>(pred.data[i]) - l[i];
        const double dg = static_cast<double>(gt.data[i]) - l[i];
        const double phi_p = dp >= theta ? 1.0 - dp : 1.0;
        const double phi_g = dg >= theta ? 1.0 - dg : 1.0;
        acc += std::fabs(phi_p - phi_g);
    }
    return acc / 1000.0;
}

MetricReport evaluate(const AlphaMatte& pred, const AlphaMatte& gt,
                      const rosta::RostaMask& regions) {
    MetricReport r;
    r.sad = sad(pred, gt);
    r.mse = mse(pred, gt);
    r.mad = mad(pred, gt);
    r.grad = grad_error(pred, gt);
    r.conn = conn_error(pred, gt);
    const RegionSad rs = region_sad(pred, gt, regions);
    r.sad_tran = rs.tran;
    r.sad_fg = rs.fg;
    r.sad_bg = rs.bg;
    r.regions_source =
        rosta::kind_name(regions.kind) + "-k" + std::to_string(regions.kernel);
    return r;
}

}  // namespace matkit::metrics
