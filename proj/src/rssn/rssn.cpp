#include "matkit/rssn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "matkit/core/io.hpp"
#include "matkit/core/ops.hpp"
#include "matkit/core/parallel.hpp"

namespace matkit::rssn {

namespace {

int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

}  // namespace

RgbImage box_blur(const RgbImage& image, int r) {
    if (r < 1) throw std::invalid_argument("box blur kernel must be >= 1");
    if (r == 1) return image;
    const int w = image.width, h = image.height;
    // Window offsets follow the usual even-kernel anchor convention:
    // [x - r/2, x + r - 1 - r/2]. Replicate padding keeps every window at
    // exactly r x r samples.
    const int lo = r / 2;
    const int hi = r - 1 - lo;
    const int pw = w + lo + hi;
    const int ph = h + lo + hi;
    RgbImage out(w, h);
    std::vector<double> integral(static_cast<size_t>(pw + 1) * (ph + 1));
    const double inv_area = 1.0 / (static_cast<double>(r) * r);
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < ph; ++y) {
            const int sy = clampi(y - lo, 0, h - 1);
            double row_sum = 0.0;
            for (int x = 0; x < pw; ++x) {
                const int sx = clampi(x - lo, 0, w - 1);
                row_sum += image.data[(static_cast<size_t>(sy) * w + sx) * 3 + c];
                integral[static_cast<size_t>(y + 1) * (pw + 1) + x + 1] =
                    integral[static_cast<size_t>(y) * (pw + 1) + x + 1] + row_sum;
            }
        }
        for (int y = 0; y < h; ++y) {
            const size_t top = static_cast<size_t>(y) * (pw + 1);
            const size_t bot = static_cast<size_t>(y + r) * (pw + 1);
            for (int x = 0; x < w; ++x) {
                const double sum = integral[bot + x + r] - integral[top + x + r] -
                                   integral[bot + x] + integral[top + x];
                out.data[(static_cast<size_t>(y) * w + x) * 3 + c] =
                    static_cast<float>(sum * inv_area);
            }
        }
    }
    return out;
}

RgbImage add_gaussian_noise(const RgbImage& image, double sigma_255, core::Rng& rng) {
    if (sigma_255 < 0.0) throw std::invalid_argument("noise sigma must be non-negative");
    if (sigma_255 == 0.0) return image;
    const float sigma = static_cast<float>(sigma_255 / 255.0);
    RgbImage out(image.width, image.height);
    for (size_t i = 0; i < image.data.size(); ++i) {
        out.data[i] = core::clamp01(image.data[i] + sigma * static_cast<float>(rng.next_normal()));
    }
    return out;
}

RgbImage blend(const RgbImage& fg, const AlphaMatte& alpha, const RgbImage& bg) {
    if (fg.width != alpha.width || fg.height != alpha.height || !core::same_size(fg, bg)) {
        throw std::invalid_argument("blend inputs must share dimensions");
    }
    RgbImage out(fg.width, fg.height);
    for (size_t i = 0; i < alpha.data.size(); ++i) {
        const float a = alpha.data[i];
        for (int c = 0; c < 3; ++c) {
            out.data[i * 3 + c] = a * fg.data[i * 3 + c] + (1.0f - a) * bg.data[i * 3 + c];
        }
    }
    return out;
}

RgbImage adapt_background(const RgbImage& bg, int fg_w, int fg_h) {
    if (fg_w < 1 || fg_h < 1) throw std::invalid_argument("target dimensions must be >= 1");
    if (bg.width == fg_w && bg.height == fg_h) return bg;
    const double scale =
        std::max(static_cast<double>(fg_w) / bg.width, static_cast<double>(fg_h) / bg.height);
    const int sw = std::max(fg_w, static_cast<int>(std::llround(bg.width * scale)));
    const int sh = std::max(fg_h, static_cast<int>(std::llround(bg.height * scale)));
    const RgbImage scaled = core::resize(bg, sw, sh);
    const int x0 = (sw - fg_w) / 2;
    const int y0 = (sh - fg_h) / 2;
    RgbImage out(fg_w, fg_h);
    for (int y = 0; y < fg_h; ++y) {
        const float* src = scaled.data.data() + (static_cast<size_t>(y0 + y) * sw + x0) * 3;
        std::copy(src, src + static_cast<size_t>(fg_w) * 3,
                  out.data.data() + static_cast<size_t>(y) * fg_w * 3);
    }
    return out;
}

CompositionRecipe draw_recipe(uint64_t master_seed, uint64_t item_index, int k, int K,
                              const ComposeOptions& opts) {
    CompositionRecipe r;
    r.master_seed = master_seed;
    r.item_index = item_index;
    r.k = k;
    r.K = K;
    core::Rng rng(core::mix_seed(master_seed, item_index, static_cast<uint64_t>(k)));
    if (opts.force_all) {
        r.denoise_applied = true;
        r.blur_applied = true;
        r.blur_kernel = kBlurKernels[std::min(4, static_cast<int>(rng.next_double() * 5.0))];
        r.noise_applied = true;
        r.noise_seed = rng.next_u64();
        return r;
    }
    if (opts.allow_denoise) {
        r.denoise_applied = rng.next_double() < 0.5;
    }
    if (opts.allow_blur) {
        r.blur_applied = rng.next_double() < 0.5;
        if (r.blur_applied) {
            r.blur_kernel = kBlurKernels[std::min(4, static_cast<int>(rng.next_double() * 5.0))];
        }
    }
    if (opts.allow_noise) {
        r.noise_applied = rng.next_double() < 0.5;
        if (r.noise_applied) r.noise_seed = rng.next_u64();
    }
    return r;
}

RgbImage compose_from_recipe(const RgbImage& fg, const AlphaMatte& alpha,
                             const RgbImage& background, const CompositionRecipe& recipe) {
    if (fg.width != alpha.width || fg.height != alpha.height) {
        throw std::invalid_argument("foreground/alpha dimension mismatch");
    }
    if (recipe.blur_applied !=
        (std::find(std::begin(kBlurKernels), std::end(kBlurKernels), recipe.blur_kernel) !=
         std::end(kBlurKernels))) {
        throw std::invalid_argument("recipe blur kernel inconsistent with blur flag");
    }
    RgbImage f = fg;
    RgbImage b = adapt_background(background, fg.width, fg.height);
    if (recipe.denoise_applied) {
        f = denoise(f);
        b = denoise(b);
    }
    if (recipe.blur_applied) {
        b = box_blur(b, recipe.blur_kernel);
    }
    RgbImage composite = blend(f, alpha, b);
    if (recipe.noise_applied) {
        core::Rng rng(recipe.noise_seed);
        composite = add_gaussian_noise(composite, recipe.noise_sigma, rng);
    }
    return composite;
}

std::pair<RgbImage, CompositionRecipe> compose(const RgbImage& fg, const AlphaMatte& alpha,
                                               const RgbImage& background,
                                               const CompositionRecipe& recipe,
                                               const ComposeOptions& opts) {
    CompositionRecipe realized =
        draw_recipe(recipe.master_seed, recipe.item_index, recipe.k, recipe.K, opts);
    realized.noise_sigma = recipe.noise_sigma;
    realized.background_id = recipe.background_id;
    return {compose_from_recipe(fg, alpha, background, realized), realized};
}

std::vector<ComposeOutcome> compose_batch(const std::vector<ComposeJob>& jobs,
                                          uint64_t master_seed, const ComposeOptions& opts,
                                          const SolverParams& solver, int workers) {
    std::vector<size_t> offsets(jobs.size() + 1, 0);
    for (size_t j = 0; j < jobs.size(); ++j) {
        offsets[j + 1] = offsets[j] + jobs[j].background_paths.size();
    }
    std::vector<ComposeOutcome> outcomes(offsets.back());
    core::parallel_for(jobs.size(), workers, [&](size_t j) {
        const ComposeJob& job = jobs[j];
        const int K = static_cast<int>(job.background_paths.size());
        auto fail_all = [&](const std::string& message) {
            for (int k = 0; k < K; ++k) {
                ComposeOutcome& o = outcomes[offsets[j] + k];
                o.ok = false;
                o.id = job.id;
                o.error = message;
            }
        };
        RgbImage fg;
        AlphaMatte alpha;
        try {
            RgbImage image = core::load_rgb(job.image_path);
            alpha = core::load_alpha(job.alpha_path);
            fg = job.is_original ? estimate_foreground(image, alpha, solver).fg
                                 : std::move(image);
        } catch (const std::exception& e) {
            fail_all(e.what());
            return;
        }
        for (int k = 0; k < K; ++k) {
            ComposeOutcome& o = outcomes[offsets[j] + k];
            o.id = job.id;
            try {
                const RgbImage background = core::load_rgb(job.background_paths[k]);
                CompositionRecipe seed_recipe;
                seed_recipe.master_seed = master_seed;
                seed_recipe.item_index = job.item_index;
                seed_recipe.k = k;
                seed_recipe.K = K;
                if (k < static_cast<int>(job.background_ids.size())) {
                    seed_recipe.background_id = job.background_ids[k];
                }
                auto [composite, recipe] = compose(fg, alpha, background, seed_recipe, opts);
                o.composite = std::move(composite);
                o.recipe = recipe;
                o.ok = true;
            } catch (const std::exception& e) {
                o.ok = false;
                o.error = e.what();
            }
        }
    });
    return outcomes;
}

}  // namespace matkit::rssn
