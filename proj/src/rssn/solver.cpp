#include <cmath>
#include <stdexcept>
#include <vector>

#include "matkit/rssn.hpp"

namespace matkit::rssn {

namespace {

// Normal equations for one color channel, unknowns x = [F; B]:
//   [ D_a^2 + L_w + reg      D_a(1-a)          ] [F]   [ a .* I       ]
//   [ D_a(1-a)               D_(1-a)^2 + L_w + reg ] [B] = [ (1-a) .* I ]
// where L_w is the 4-neighbor graph Laplacian with forward-difference
// weights |grad alpha| taken from each edge's anchor pixel.
struct Problem {
    int w = 0;
    int h = 0;
    std::vector<double> a;
    std::vector<double> edge_w;
    double reg = 0.0;
};

void apply_system(const Problem& p, const std::vector<double>& x, std::vector<double>& y) {
    const size_t n = p.a.size();
    const double* F = x.data();
    const double* B = x.data() + n;
    double* yF = y.data();
    double* yB = y.data() + n;
    for (size_t i = 0; i < n; ++i) {
        const double ai = p.a[i];
        const double cross = ai * (1.0 - ai);
        yF[i] = (ai * ai + p.reg) * F[i] + cross * B[i];
        yB[i] = cross * F[i] + ((1.0 - ai) * (1.0 - ai) + p.reg) * B[i];
    }
    for (int yy = 0; yy < p.h; ++yy) {
        for (int xx = 0; xx < p.w; ++xx) {
            const size_t i = static_cast<size_t>(yy) * p.w + xx;
            const double wi = p.edge_w[i];
            if (wi == 0.0) continue;
            if (xx + 1 < p.w) {
                const size_t j = i + 1;
                const double dF = wi * (F[i] - F[j]);
                yF[i] += dF;
                yF[j] -= dF;
                const double dB = wi * (B[i] - B[j]);
                yB[i] += dB;
                yB[j] -= dB;
            }
            if (yy + 1 < p.h) {
                const size_t j = i + p.w;
                const double dF = wi * (F[i] - F[j]);
                yF[i] += dF;
                yF[j] -= dF;
                const double dB = wi * (B[i] - B[j]);
                yB[i] += dB;
                yB[j] -= dB;
            }
        }
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

struct CgOutcome {
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = true;
};

CgOutcome cg_solve(const Problem& p, const std::vector<double>& b, std::vector<double>& x,
                   double tol, int max_iters) {
    const size_t n2 = b.size();
    std::vector<double> r(n2), d(n2), q(n2);
    apply_system(p, x, q);
    for (size_t i = 0; i < n2; ++i) r[i] = b[i] - q[i];
    const double b_norm = std::sqrt(dot(b, b));
    if (b_norm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return {};
    }
    double rr = dot(r, r);
    CgOutcome out;
    out.rel_residual = std::sqrt(rr) / b_norm;
    if (out.rel_residual < tol) return out;
    d = r;
    for (int it = 1; it <= max_iters; ++it) {
        apply_system(p, d, q);
        const double dq = dot(d, q);
        if (dq <= 0.0) break;
        const double alpha = rr / dq;
        for (size_t i = 0; i < n2; ++i) {
            x[i] += alpha * d[i];
            r[i] -= alpha * q[i];
        }
        const double rr_next = dot(r, r);
        out.iterations = it;
        out.rel_residual = std::sqrt(rr_next) / b_norm;
        if (out.rel_residual < tol) {
            return out;
        }
        const double beta = rr_next / rr;
        rr = rr_next;
        for (size_t i = 0; i < n2; ++i) d[i] = r[i] + beta * d[i];
    }
    out.converged = false;
    return out;
}

}  // namespace

FgBgResult estimate_foreground(const RgbImage& image, const AlphaMatte& alpha,
                               const SolverParams& params) {
    if (image.width != alpha.width || image.height != alpha.height) {
        throw std::invalid_argument("image/alpha dimension mismatch");
    }
    core::require_unit_range(alpha, "alpha");
    if (params.cg_tolerance <= 0.0 || params.cg_max_iters < 1) {
        throw std::invalid_argument("invalid solver parameters");
    }
    Problem p;
    p.w = image.width;
    p.h = image.height;
    p.reg = params.regularization;
    const size_t n = alpha.data.size();
    p.a.resize(n);
    for (size_t i = 0; i < n; ++i) p.a[i] = alpha.data[i];
    p.edge_w.assign(n, 0.0);
    for (int y = 0; y < p.h; ++y) {
        for (int x = 0; x < p.w; ++x) {
            const size_t i = static_cast<size_t>(y) * p.w + x;
            double g = 0.0;
            if (x + 1 < p.w) g += std::fabs(p.a[i + 1] - p.a[i]);
            if (y + 1 < p.h) g += std::fabs(p.a[i + p.w] - p.a[i]);
            p.edge_w[i] = g;
        }
    }

    FgBgResult result;
    result.fg = RgbImage(p.w, p.h);
    result.bg = RgbImage(p.w, p.h);
    std::vector<double> b(2 * n), x(2 * n);
    for (int c = 0; c < 3; ++c) {
        for (size_t i = 0; i < n; ++i) {
            const double intensity = image.data[i * 3 + c];
            b[i] = p.a[i] * intensity;
            b[n + i] = (1.0 - p.a[i]) * intensity;
            x[i] = intensity;
            x[n + i] = intensity;
        }
        const CgOutcome out = cg_solve(p, b, x, params.cg_tolerance, params.cg_max_iters);
        result.converged = result.converged && out.converged;
        result.final_residual = std::max(result.final_residual, out.rel_residual);
        result.iterations = std::max(result.iterations, out.iterations);
        for (size_t i = 0; i < n; ++i) {
            result.fg.data[i * 3 + c] = core::clamp01(static_cast<float>(x[i]));
            result.bg.data[i * 3 + c] = core::clamp01(static_cast<float>(x[n + i]));
        }
    }
    return result;
}

}  // namespace matkit::rssn
