#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "matkit/core/image.hpp"
#include "matkit/core/rng.hpp"

namespace matkit::rssn {

using core::AlphaMatte;
using core::RgbImage;

struct SolverParams {
    double cg_tolerance = 1e-5;  // relative residual target
    int cg_max_iters = 2000;
    double regularization = 1e-8;
};

struct FgBgResult {
    RgbImage fg;
    RgbImage bg;
    bool converged = true;
    double final_residual = 0.0;  // worst relative residual across channels
    int iterations = 0;           // worst channel's iteration count
};

// Recovers (F, B) from (I, alpha) by minimizing the composite residual plus
// an alpha-gradient-weighted smoothness term, per channel via conjugate
// gradient. Non-convergence is reported through the result, not thrown.
FgBgResult estimate_foreground(const RgbImage& image, const AlphaMatte& alpha,
                               const SolverParams& params = {});

// Two-stage collaborative-filtering denoiser (hard threshold + Wiener),
// fixed internal noise level of 10/255, per channel, deterministic.
RgbImage denoise(const RgbImage& image);

// r x r unweighted mean with replicate padding, O(1) per pixel.
RgbImage box_blur(const RgbImage& image, int r);

// Adds i.i.d. normal noise of std sigma_255/255 in unit scale, clamped.
RgbImage add_gaussian_noise(const RgbImage& image, double sigma_255, core::Rng& rng);

// Plain alpha blending: out = alpha * fg + (1 - alpha) * bg.
RgbImage blend(const RgbImage& fg, const AlphaMatte& alpha, const RgbImage& bg);

// Scales the background so it covers the foreground's extent (aspect
// preserved, shorter relative side matched), then center-crops to exactly
// fg_w x fg_h.
RgbImage adapt_background(const RgbImage& bg, int fg_w, int fg_h);

inline constexpr int kBlurKernels[5] = {20, 30, 40, 50, 60};

struct CompositionRecipe {
    uint64_t master_seed = 0;
    uint64_t item_index = 0;
    int k = 0;  // background slot within the item
    int K = 5;
    bool denoise_applied = false;
    bool blur_applied = false;
    int blur_kernel = 0;  // one of kBlurKernels when blur_applied
    bool noise_applied = false;
    double noise_sigma = 10.0;  // std-dev on the 0..255 scale
    uint64_t noise_seed = 0;    // derived stream; recorded for exact replay
    std::string background_id;
};

struct ComposeOptions {
    bool allow_denoise = true;
    bool allow_blur = true;
    bool allow_noise = true;
    bool force_all = false;  // every stage on; gates are not drawn
};

// Draws the stochastic choices for slot (item_index, k) from the stream
// seeded with mix_seed(master_seed, item_index, k) and records them.
CompositionRecipe draw_recipe(uint64_t master_seed, uint64_t item_index, int k, int K,
                              const ComposeOptions& opts = {});

// Executes a fully realized recipe; no randomness beyond the recorded
// noise_seed, so replays are byte-identical.
RgbImage compose_from_recipe(const RgbImage& fg, const AlphaMatte& alpha, const RgbImage& background,
                             const CompositionRecipe& recipe);

// draw_recipe + compose_from_recipe in one step.
std::pair<RgbImage, CompositionRecipe> compose(const RgbImage& fg, const AlphaMatte& alpha,
                                               const RgbImage& background,
                                               const CompositionRecipe& recipe,
                                               const ComposeOptions& opts = {});

struct ComposeJob {
    uint64_t item_index = 0;
    std::string id;
    std::string image_path;  // foreground colors, or the original photograph
    std::string alpha_path;
    bool is_original = false;
    std::vector<std::string> background_paths;  // K entries
    std::vector<std::string> background_ids;
};

struct ComposeOutcome {
    bool ok = false;
    std::string error;
    std::string id;
    CompositionRecipe recipe;
    RgbImage composite;
};

// K composites per job, flattened in (job, k) order; failures are recorded
// per outcome and do not stop the batch. Results are independent of the
// worker count.
std::vector<ComposeOutcome> compose_batch(const std::vector<ComposeJob>& jobs,
                                          uint64_t master_seed,
                                          const ComposeOptions& opts = {},
                                          const SolverParams& solver = {}, int workers = 1);

}  // namespace matkit::rssn
