#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "matkit/combine.hpp"
#include "matkit/core/io.hpp"
#include "matkit/core/ops.hpp"
#include "matkit/core/parallel.hpp"
#include "matkit/datasets.hpp"
#include "matkit/losses.hpp"
#include "matkit/metrics.hpp"
#include "matkit/rosta.hpp"
#include "matkit/rssn.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitPartial = 2;

void log_line(const ordered_json& j) { std::cerr << j.dump() << "\n"; }

void log_config(const std::string& cmd, ordered_json params) {
    ordered_json j;
    j["event"] = "config";
    j["cmd"] = cmd;
    j["params"] = std::move(params);
    log_line(j);
}

void log_error(const std::string& message) {
    ordered_json j;
    j["event"] = "error";
    j["message"] = message;
    log_line(j);
}

std::string fraction_name(int den) { return "1/" + std::to_string(den); }

int parse_fraction_den(const std::string& text) {
    if (text.rfind("1/", 0) != 0) {
        throw CLI::ValidationError("ratio must be written as 1/2, 1/3 or 1/4, got " + text);
    }
    return std::stoi(text.substr(2));
}

std::vector<fs::path> list_images(const std::string& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const std::string p = e.path().string();
        if (matkit::core::has_extension(p, ".png") || matkit::core::has_extension(p, ".jpg") ||
            matkit::core::has_extension(p, ".jpeg")) {
            files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

matkit::combine::ClassProbMap one_hot_from_rosta(const matkit::rosta::RostaMask& mask) {
    const int channels = mask.num_classes();
    matkit::combine::ClassProbMap probs(mask.width, mask.height, channels);
    for (size_t i = 0; i < mask.labels.size(); ++i) {
        int c;
        if (channels == 3) {
            c = mask.labels[i];
        } else if (mask.kind == matkit::rosta::Kind::FT) {
            c = mask.labels[i] == 2 ? 1 : 0;
        } else {
            c = mask.labels[i] == 0 ? 1 : 0;
        }
        probs.data[i * channels + c] = 1.0f;
    }
    return probs;
}

matkit::combine::ClassProbMap glance_from_gray(const matkit::core::Gray8& img,
                                               matkit::rosta::Kind kind) {
    using matkit::rosta::Kind;
    if (kind == Kind::TT) {
        matkit::combine::ClassProbMap probs(img.width, img.height, 3);
        for (size_t i = 0; i < img.data.size(); ++i) {
            int c;
            switch (img.data[i]) {
                case 0: c = 0; break;
                case 128: c = 1; break;
                case 255: c = 2; break;
                default:
                    throw std::runtime_error("tt glance PNG must contain only 0/128/255");
            }
            probs.data[i * 3 + c] = 1.0f;
        }
        return probs;
    }
    matkit::combine::ClassProbMap probs(img.width, img.height, 2);
    for (size_t i = 0; i < img.data.size(); ++i) {
        const bool semantic = kind == Kind::FT ? img.data[i] == 255 : img.data[i] == 0;
        probs.data[i * 2 + (semantic ? 1 : 0)] = 1.0f;
    }
    return probs;
}

ordered_json recipe_json(const matkit::rssn::CompositionRecipe& r) {
    ordered_json j;
    j["master_seed"] = r.master_seed;
    j["item_index"] = r.item_index;
    j["k"] = r.k;
    j["K"] = r.K;
    j["denoise_applied"] = r.denoise_applied;
    j["blur_applied"] = r.blur_applied;
    j["blur_kernel"] = r.blur_kernel;
    j["noise_applied"] = r.noise_applied;
    j["noise_sigma"] = r.noise_sigma;
    j["noise_seed"] = r.noise_seed;
    j["background_id"] = r.background_id;
    return j;
}

ordered_json metrics_json(const std::string& id, const matkit::metrics::MetricReport& m) {
    ordered_json j;
    j["id"] = id;
    j["sad"] = m.sad;
    j["mse"] = m.mse;
    j["mad"] = m.mad;
    j["grad"] = m.grad;
    j["conn"] = m.conn;
    j["sad_tran"] = m.sad_tran;
    j["sad_fg"] = m.sad_fg;
    j["sad_bg"] = m.sad_bg;
    j["regions_source"] = m.regions_source;
    return j;
}

struct RostaArgs {
    std::string kind = "tt";
    int kernel = 0;  // 0: kind default (25 for tt, 50 for ft/bt)
    std::string alpha_path;
    std::string out_path;
};

int run_rosta(const RostaArgs& args) {
    const matkit::rosta::Kind kind = matkit::rosta::kind_from_name(args.kind);
    const int kernel =
        args.kernel > 0 ? args.kernel : (kind == matkit::rosta::Kind::TT ? 25 : 50);
    log_config("rosta", {{"kind", args.kind},
                         {"kernel", kernel},
                         {"alpha", args.alpha_path},
                         {"out", args.out_path}});
    const matkit::core::AlphaMatte alpha = matkit::core::load_alpha(args.alpha_path);
    const matkit::rosta::RostaMask mask = matkit::rosta::make(kind, alpha, kernel);
    matkit::rosta::save_rosta(args.out_path, mask);
    ordered_json done;
    done["event"] = "written";
    done["out"] = args.out_path;
    done["effective_kernel"] = mask.kernel;
    log_line(done);
    return kExitOk;
}

struct ComposeArgs {
    std::string manifest_path;
    std::string bg_dir;
    std::string out_dir;
    uint64_t seed = 0;
    int k = 5;
    int workers = 0;
    bool no_denoise = false;
    bool no_blur = false;
    bool no_noise = false;
    bool force_all = false;
};

int run_compose(const ComposeArgs& args) {
    const int workers = args.workers > 0 ? args.workers : matkit::core::default_workers();
    log_config("compose", {{"manifest", args.manifest_path},
                           {"bg_dir", args.bg_dir},
                           {"out_dir", args.out_dir},
                           {"seed", args.seed},
                           {"k", args.k},
                           {"workers", workers},
                           {"no_denoise", args.no_denoise},
                           {"no_blur", args.no_blur},
                           {"no_noise", args.no_noise},
                           {"force_all", args.force_all}});
    const std::vector<matkit::datasets::ManifestEntry> manifest =
        matkit::datasets::load_manifest(args.manifest_path);

    std::map<std::string, const matkit::datasets::ManifestEntry*> alphas;
    for (const auto& e : manifest) {
        if (e.role == "alpha") alphas[e.id] = &e;
    }
    struct Row {
        const matkit::datasets::ManifestEntry* image;
        const matkit::datasets::ManifestEntry* alpha;
    };
    std::vector<Row> rows;
    for (const auto& e : manifest) {
        if (e.role != "foreground" && e.role != "original") continue;
        auto it = alphas.find(e.id);
        if (it == alphas.end()) {
            throw std::runtime_error("no alpha row for id " + e.id);
        }
        rows.push_back({&e, it->second});
    }
    if (rows.empty()) throw std::runtime_error("manifest has no foreground rows");

    const std::vector<fs::path> bg_files = list_images(args.bg_dir);
    if (bg_files.size() < static_cast<size_t>(args.k)) {
        throw std::runtime_error("background directory holds fewer than K images");
    }
    std::vector<matkit::datasets::ManifestEntry> bg_entries(bg_files.size());
    for (size_t i = 0; i < bg_files.size(); ++i) {
        bg_entries[i].id = bg_files[i].stem().string();
        bg_entries[i].path = bg_files[i].string();
        bg_entries[i].role = "background";
    }
    std::map<std::string, std::string> bg_path_by_id;
    for (const auto& e : bg_entries) bg_path_by_id[e.id] = e.path;
    const auto assignment =
        matkit::datasets::sample_backgrounds(bg_entries, rows.size(), args.k, args.seed);

    std::vector<matkit::rssn::ComposeJob> jobs(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        jobs[i].item_index = i;
        jobs[i].id = rows[i].image->id;
        jobs[i].image_path = rows[i].image->path;
        jobs[i].alpha_path = rows[i].alpha->path;
        jobs[i].is_original = rows[i].image->role == "original";
        for (const std::string& bg_id : assignment[i]) {
            jobs[i].background_ids.push_back(bg_id);
            jobs[i].background_paths.push_back(bg_path_by_id.at(bg_id));
        }
    }

    matkit::rssn::ComposeOptions opts;
    opts.allow_denoise = !args.no_denoise;
    opts.allow_blur = !args.no_blur;
    opts.allow_noise = !args.no_noise;
    opts.force_all = args.force_all;
    const auto outcomes =
        matkit::rssn::compose_batch(jobs, args.seed, opts, matkit::rssn::SolverParams{}, workers);

    fs::create_directories(args.out_dir);
    std::ofstream recipes(fs::path(args.out_dir) / "recipes.jsonl");
    size_t failures = 0;
    for (const auto& o : outcomes) {
        if (!o.ok) {
            ++failures;
            ordered_json j;
            j["event"] = "item_error";
            j["id"] = o.id;
            j["message"] = o.error;
            log_line(j);
            continue;
        }
        const std::string out_path =
            (fs::path(args.out_dir) / (o.id + "_k" + std::to_string(o.recipe.k) + ".png"))
                .string();
        matkit::core::save_rgb(out_path, o.composite);
        ordered_json j = recipe_json(o.recipe);
        j["id"] = o.id;
        j["path"] = out_path;
        recipes << j.dump() << "\n";
        log_line(j);
    }
    return failures == 0 ? kExitOk : kExitPartial;
}

struct MergeArgs {
    std::string kind = "tt";
    std::string glance_path;
    std::string focus_path;
    std::string out_path;
};

int run_merge(const MergeArgs& args) {
    log_config("merge", {{"kind", args.kind},
                         {"glance", args.glance_path},
                         {"focus", args.focus_path},
                         {"out", args.out_path}});
    const matkit::rosta::Kind kind = matkit::rosta::kind_from_name(args.kind);
    const matkit::combine::ClassProbMap glance =
        glance_from_gray(matkit::core::load_gray8(args.glance_path), kind);
    const matkit::core::AlphaMatte focus = matkit::core::load_alpha(args.focus_path);
    matkit::core::AlphaMatte merged;
    switch (kind) {
        case matkit::rosta::Kind::TT: merged = matkit::combine::cm_merge_tt(glance, focus); break;
        case matkit::rosta::Kind::FT: merged = matkit::combine::cm_merge_ft(glance, focus); break;
        case matkit::rosta::Kind::BT: merged = matkit::combine::cm_merge_bt(glance, focus); break;
    }
    matkit::core::save_alpha(args.out_path, merged);
    return kExitOk;
}

struct EnsembleArgs {
    std::string a1, a2, a3, out_path;
};

int run_ensemble(const EnsembleArgs& args) {
    log_config("ensemble",
               {{"a1", args.a1}, {"a2", args.a2}, {"a3", args.a3}, {"out", args.out_path}});
    const auto m = matkit::combine::ensemble_median(matkit::core::load_alpha(args.a1),
                                                    matkit::core::load_alpha(args.a2),
                                                    matkit::core::load_alpha(args.a3));
    matkit::core::save_alpha(args.out_path, m);
    return kExitOk;
}

struct HybridArgs {
    std::string initial_path;
    std::string transition_path;
    std::string focus_path;
    std::string out_path;
    std::string d1 = "1/3";
    std::string d2 = "1/2";
    int width = 0;
    int height = 0;
};

int run_hybrid(const HybridArgs& args) {
    matkit::combine::HybridConfig cfg;
    cfg.d1_den = parse_fraction_den(args.d1);
    cfg.d2_den = parse_fraction_den(args.d2);
    matkit::combine::validate(cfg);
    log_config("hybrid", {{"initial", args.initial_path},
                          {"transition", args.transition_path},
                          {"focus", args.focus_path},
                          {"out", args.out_path},
                          {"d1", fraction_name(cfg.d1_den)},
                          {"d2", fraction_name(cfg.d2_den)},
                          {"width", args.width},
                          {"height", args.height}});
    matkit::core::AlphaMatte initial = matkit::core::load_alpha(args.initial_path);
    matkit::core::AlphaMatte transition_f = matkit::core::load_alpha(args.transition_path);
    matkit::core::AlphaMatte focus = matkit::core::load_alpha(args.focus_path);
    const int tw = args.width > 0 ? args.width : initial.width;
    const int th = args.height > 0 ? args.height : initial.height;
    initial = matkit::core::resize(initial, tw, th);
    transition_f = matkit::core::resize(transition_f, tw, th);
    focus = matkit::core::resize(focus, tw, th);
    matkit::core::BinaryMask transition(tw, th);
    for (size_t i = 0; i < transition_f.data.size(); ++i) {
        transition.data[i] = transition_f.data[i] >= 0.5f ? 1 : 0;
    }
    const auto out = matkit::combine::hybrid_replace(initial, transition, focus);
    matkit::core::save_alpha(args.out_path, out);
    return kExitOk;
}

struct EvalArgs {
    std::string pred_dir;
    std::string gt_dir;
    std::string trimap_dir;
    std::string out_path;
    int kernel = 25;
    int workers = 0;
};

int run_eval(const EvalArgs& args) {
    const int workers = args.workers > 0 ? args.workers : matkit::core::default_workers();
    log_config("eval", {{"pred_dir", args.pred_dir},
                        {"gt_dir", args.gt_dir},
                        {"trimap_dir", args.trimap_dir},
                        {"out", args.out_path},
                        {"kernel", args.kernel},
                        {"workers", workers}});
    const std::vector<fs::path> preds = list_images(args.pred_dir);
    if (preds.empty()) throw std::runtime_error("no predictions in " + args.pred_dir);

    struct Row {
        bool ok = false;
        std::string id;
        std::string error;
        matkit::metrics::MetricReport report;
    };
    std::vector<Row> rows(preds.size());
    matkit::core::parallel_for(preds.size(), workers, [&](size_t i) {
        Row& row = rows[i];
        row.id = preds[i].stem().string();
        try {
            const auto pred = matkit::core::load_alpha(preds[i].string());
            const fs::path gt_path = fs::path(args.gt_dir) / (row.id + ".png");
            const auto gt = matkit::core::load_alpha(gt_path.string());
            matkit::rosta::RostaMask regions;
            if (!args.trimap_dir.empty()) {
                const fs::path tp = fs::path(args.trimap_dir) / (row.id + ".png");
                regions = matkit::rosta::from_trimap(matkit::core::load_gray8(tp.string()),
                                                     matkit::rosta::Kind::TT, args.kernel);
            } else {
                regions = matkit::rosta::make_tt(gt, args.kernel);
            }
            row.report = matkit::metrics::evaluate(pred, gt, regions);
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });

    std::ofstream out(args.out_path);
    if (!out) throw std::runtime_error("cannot write " + args.out_path);
    matkit::metrics::MetricReport mean;
    size_t ok_count = 0, failures = 0;
    for (const Row& row : rows) {
        if (!row.ok) {
            ++failures;
            ordered_json j;
            j["event"] = "item_error";
            j["id"] = row.id;
            j["message"] = row.error;
            log_line(j);
            continue;
        }
        out << metrics_json(row.id, row.report).dump() << "\n";
        mean.sad += row.report.sad;
        mean.mse += row.report.mse;
        mean.mad += row.report.mad;
        mean.grad += row.report.grad;
        mean.conn += row.report.conn;
        mean.sad_tran += row.report.sad_tran;
        mean.sad_fg += row.report.sad_fg;
        mean.sad_bg += row.report.sad_bg;
        ++ok_count;
    }
    if (ok_count > 0) {
        const double n = static_cast<double>(ok_count);
        mean.sad /= n;
        mean.mse /= n;
        mean.mad /= n;
        mean.grad /= n;
        mean.conn /= n;
        mean.sad_tran /= n;
        mean.sad_fg /= n;
        mean.sad_bg /= n;
        mean.regions_source = rows.front().report.regions_source;
        out << metrics_json("mean", mean).dump() << "\n";
    }
    return failures == 0 ? kExitOk : kExitPartial;
}

struct LossesArgs {
    std::string pred_path;
    std::string gt_path;
    std::string trimap_path;
    std::string glance_path;
    std::string fg_path;
    std::string bg_path;
    int kernel = 25;
};

int run_losses(const LossesArgs& args) {
    log_config("losses", {{"pred", args.pred_path},
                          {"gt", args.gt_path},
                          {"trimap", args.trimap_path},
                          {"glance", args.glance_path},
                          {"fg", args.fg_path},
                          {"bg", args.bg_path},
                          {"kernel", args.kernel},
                          {"lambda1", 0.25},
                          {"lambda2", 0.25},
                          {"lambda3", 0.25}});
    matkit::losses::LossInputs in;
    in.gt_alpha = matkit::core::load_alpha(args.gt_path);
    const matkit::core::AlphaMatte pred = matkit::core::load_alpha(args.pred_path);
    in.focus_pred = pred;
    in.merged_pred = pred;

    matkit::rosta::RostaMask gt_regions;
    if (!args.trimap_path.empty()) {
        gt_regions = matkit::rosta::from_trimap(matkit::core::load_gray8(args.trimap_path),
                                                matkit::rosta::Kind::TT, args.kernel);
    } else {
        gt_regions = matkit::rosta::make_tt(in.gt_alpha, args.kernel);
    }
    in.gt_labels = gt_regions.labels;
    in.transition = matkit::rosta::transition_weight(gt_regions);

    std::string glance_source;
    if (!args.glance_path.empty()) {
        glance_source = "file";
        const matkit::core::RgbImage g = matkit::core::load_rgb(args.glance_path);
        in.glance = matkit::combine::ClassProbMap(g.width, g.height, 3);
        for (size_t i = 0; i < in.glance.data.size(); i += 3) {
            const float sum = g.data[i] + g.data[i + 1] + g.data[i + 2];
            if (sum <= 0.0f) {
                throw std::runtime_error("glance PNG has a zero probability pixel");
            }
            for (int c = 0; c < 3; ++c) in.glance.data[i + c] = g.data[i + c] / sum;
        }
    } else {
        glance_source = "derived from prediction";
        in.glance = one_hot_from_rosta(matkit::rosta::make_tt(pred, args.kernel));
    }

    const bool have_comp = !args.fg_path.empty() && !args.bg_path.empty();
    matkit::losses::LossReport report;
    if (have_comp) {
        in.fg = matkit::core::load_rgb(args.fg_path);
        in.bg = matkit::core::load_rgb(args.bg_path);
        report = matkit::losses::loss_total(in);
    } else {
        report.l_ce = matkit::losses::loss_ce(in.glance, in.gt_labels);
        report.l_alpha_t = matkit::losses::loss_alpha(in.focus_pred, in.gt_alpha, in.transition);
        report.l_lap_t = matkit::losses::loss_lap(in.focus_pred, in.gt_alpha, in.transition);
        report.l_fd = report.l_alpha_t + report.l_lap_t;
        report.l_alpha_full = matkit::losses::loss_alpha(in.merged_pred, in.gt_alpha);
        report.l_lap_full = matkit::losses::loss_lap(in.merged_pred, in.gt_alpha);
        report.l_comp = 0.0;
        report.l_cm = report.l_alpha_full + report.l_lap_full + report.l_comp;
        const matkit::losses::LossWeights w;
        report.l_total =
            w.lambda1 * report.l_ce + w.lambda2 * report.l_fd + w.lambda3 * report.l_cm;
    }
    ordered_json j;
    j["l_ce"] = report.l_ce;
    j["l_alpha_t"] = report.l_alpha_t;
    j["l_lap_t"] = report.l_lap_t;
    j["l_fd"] = report.l_fd;
    j["l_alpha_full"] = report.l_alpha_full;
    j["l_lap_full"] = report.l_lap_full;
    j["l_comp"] = report.l_comp;
    j["l_cm"] = report.l_cm;
    j["l_total"] = report.l_total;
    j["epsilon"] = report.epsilon;
    j["glance_source"] = glance_source;
    j["comp_inputs"] = have_comp ? "files" : "skipped";
    std::cout << j.dump() << "\n";
    return kExitOk;
}

struct IngestArgs {
    std::string dir;
    std::string out_dir;
    std::string manifest_path;
    int min_side = 1080;
    int workers = 0;
};

int run_ingest(const IngestArgs& args) {
    const int workers = args.workers > 0 ? args.workers : matkit::core::default_workers();
    log_config("ingest", {{"dir", args.dir},
                          {"out_dir", args.out_dir},
                          {"manifest", args.manifest_path},
                          {"min_side", args.min_side},
                          {"workers", workers}});
    const auto outcome =
        matkit::datasets::ingest_backgrounds(args.dir, args.out_dir, args.min_side, workers);
    matkit::datasets::save_manifest(args.manifest_path, outcome.accepted);
    for (const auto& [path, reason] : outcome.rejected) {
        ordered_json j;
        j["event"] = "rejected";
        j["path"] = path;
        j["reason"] = reason;
        log_line(j);
    }
    for (const auto& [path, message] : outcome.failed) {
        ordered_json j;
        j["event"] = "item_error";
        j["path"] = path;
        j["message"] = message;
        log_line(j);
    }
    ordered_json j;
    j["event"] = "ingested";
    j["accepted"] = outcome.accepted.size();
    j["rejected"] = outcome.rejected.size();
    j["failed"] = outcome.failed.size();
    log_line(j);
    return outcome.failed.empty() ? kExitOk : kExitPartial;
}

struct DedupArgs {
    std::string manifest_path;
    std::string out_path;
    int threshold = 4;
    int workers = 0;
};

int run_dedup(const DedupArgs& args) {
    const int workers = args.workers > 0 ? args.workers : matkit::core::default_workers();
    log_config("dedup", {{"manifest", args.manifest_path},
                         {"out", args.out_path},
                         {"threshold", args.threshold},
                         {"workers", workers}});
    std::vector<matkit::datasets::ManifestEntry> entries =
        matkit::datasets::load_manifest(args.manifest_path);
    matkit::core::parallel_for(entries.size(), workers, [&](size_t i) {
        if (!entries[i].has_phash) {
            entries[i].phash = matkit::datasets::compute_phash(matkit::core::load_rgb(entries[i].path));
            entries[i].has_phash = true;
        }
    });
    const auto kept = matkit::datasets::dedup(entries, args.threshold);
    matkit::datasets::save_manifest(args.out_path, kept);
    ordered_json j;
    j["event"] = "deduped";
    j["input"] = entries.size();
    j["kept"] = kept.size();
    log_line(j);
    return kExitOk;
}

struct SplitArgs {
    std::string manifest_path;
    std::string out_path;
    size_t train = 15000;
    size_t val = 5000;
    uint64_t seed = 0;
};

int run_split(const SplitArgs& args) {
    log_config("split", {{"manifest", args.manifest_path},
                         {"out", args.out_path},
                         {"train", args.train},
                         {"val", args.val},
                         {"seed", args.seed}});
    const auto entries = matkit::datasets::load_manifest(args.manifest_path);
    const auto split = matkit::datasets::split_backgrounds(entries, args.train, args.val, args.seed);
    matkit::datasets::save_manifest(args.out_path, split);
    return kExitOk;
}

struct TracksArgs {
    std::string manifest_path;
    std::string out_dir;
    uint64_t seed = 0;
};

int run_tracks(const TracksArgs& args) {
    log_config("tracks", {{"manifest", args.manifest_path},
                          {"out_dir", args.out_dir},
                          {"seed", args.seed}});
    const auto entries = matkit::datasets::load_manifest(args.manifest_path);
    const auto tracks = matkit::datasets::make_tracks(entries, args.seed);
    fs::create_directories(args.out_dir);
    matkit::datasets::save_manifest((fs::path(args.out_dir) / "ori.jsonl").string(), tracks.ori);
    matkit::datasets::save_manifest((fs::path(args.out_dir) / "comp_coco.jsonl").string(),
                                    tracks.comp_coco);
    matkit::datasets::save_manifest((fs::path(args.out_dir) / "comp_bg.jsonl").string(),
                                    tracks.comp_bg);
    matkit::datasets::save_manifest((fs::path(args.out_dir) / "comp_rssn.jsonl").string(),
                                    tracks.comp_rssn);
    return kExitOk;
}

struct SampleBgArgs {
    std::string bg_manifest_path;
    std::string out_path;
    size_t n_foregrounds = 0;
    int k = 5;
    uint64_t seed = 0;
};

int run_sample_bg(const SampleBgArgs& args) {
    log_config("sample-bg", {{"bg_manifest", args.bg_manifest_path},
                             {"out", args.out_path},
                             {"n_foregrounds", args.n_foregrounds},
                             {"k", args.k},
                             {"seed", args.seed}});
    const auto entries = matkit::datasets::load_manifest(args.bg_manifest_path);
    const auto table =
        matkit::datasets::sample_backgrounds(entries, args.n_foregrounds, args.k, args.seed);
    std::ofstream out(args.out_path);
    if (!out) throw std::runtime_error("cannot write " + args.out_path);
    for (size_t i = 0; i < table.size(); ++i) {
        ordered_json j;
        j["row"] = i;
        j["backgrounds"] = table[i];
        out << j.dump() << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Matting toolkit: representations, composition, combination, evaluation"};
    app.require_subcommand(1);
    app.set_config("--config")->envname("MATKIT_CONFIG");

    RostaArgs rosta_args;
    CLI::App* rosta = app.add_subcommand("rosta", "Generate a TT/FT/BT representation");
    rosta->add_option("--kind", rosta_args.kind)->check(CLI::IsMember({"tt", "ft", "bt"}));
    rosta->add_option("--kernel", rosta_args.kernel);
    rosta->add_option("--alpha", rosta_args.alpha_path)->required();
    rosta->add_option("--out", rosta_args.out_path)->required();

    ComposeArgs compose_args;
    CLI::App* compose = app.add_subcommand("compose", "Run the composition route over a manifest");
    compose->add_option("--manifest", compose_args.manifest_path)->required();
    compose->add_option("--bg-dir", compose_args.bg_dir)->required();
    compose->add_option("--out-dir", compose_args.out_dir)->required();
    compose->add_option("--seed", compose_args.seed);
    compose->add_option("--k", compose_args.k);
    compose->add_option("--workers", compose_args.workers);
    compose->add_flag("--no-denoise", compose_args.no_denoise);
    compose->add_flag("--no-blur", compose_args.no_blur);
    compose->add_flag("--no-noise", compose_args.no_noise);
    compose->add_flag("--force-all", compose_args.force_all);

    MergeArgs merge_args;
    CLI::App* merge = app.add_subcommand("merge", "Collaborative merge of glance and focus");
    merge->add_option("--kind", merge_args.kind)->check(CLI::IsMember({"tt", "ft", "bt"}));
    merge->add_option("--glance", merge_args.glance_path)->required();
    merge->add_option("--focus", merge_args.focus_path)->required();
    merge->add_option("--out", merge_args.out_path)->required();

    EnsembleArgs ensemble_args;
    CLI::App* ensemble = app.add_subcommand("ensemble", "Pixelwise median of three mattes");
    ensemble->add_option("--a1", ensemble_args.a1)->required();
    ensemble->add_option("--a2", ensemble_args.a2)->required();
    ensemble->add_option("--a3", ensemble_args.a3)->required();
    ensemble->add_option("--out", ensemble_args.out_path)->required();

    HybridArgs hybrid_args;
    CLI::App* hybrid = app.add_subcommand("hybrid", "Hybrid-resolution replacement");
    hybrid->add_option("--initial", hybrid_args.initial_path)->required();
    hybrid->add_option("--transition", hybrid_args.transition_path)->required();
    hybrid->add_option("--focus", hybrid_args.focus_path)->required();
    hybrid->add_option("--out", hybrid_args.out_path)->required();
    hybrid->add_option("--d1", hybrid_args.d1);
    hybrid->add_option("--d2", hybrid_args.d2);
    hybrid->add_option("--width", hybrid_args.width);
    hybrid->add_option("--height", hybrid_args.height);

    EvalArgs eval_args;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate predictions against ground truth");
    eval_cmd->add_option("--pred-dir", eval_args.pred_dir)->required();
    eval_cmd->add_option("--gt-dir", eval_args.gt_dir)->required();
    eval_cmd->add_option("--trimap-dir", eval_args.trimap_dir);
    eval_cmd->add_option("--out", eval_args.out_path)->required();
    eval_cmd->add_option("--kernel", eval_args.kernel);
    eval_cmd->add_option("--workers", eval_args.workers);

    LossesArgs losses_args;
    CLI::App* losses_cmd = app.add_subcommand("losses", "Reference training-loss values");
    losses_cmd->add_option("--pred", losses_args.pred_path)->required();
    losses_cmd->add_option("--gt", losses_args.gt_path)->required();
    losses_cmd->add_option("--trimap", losses_args.trimap_path);
    losses_cmd->add_option("--glance", losses_args.glance_path);
    losses_cmd->add_option("--fg", losses_args.fg_path);
    losses_cmd->add_option("--bg", losses_args.bg_path);
    losses_cmd->add_option("--kernel", losses_args.kernel);

    IngestArgs ingest_args;
    CLI::App* ingest = app.add_subcommand("ingest", "Ingest and normalize background images");
    ingest->add_option("--dir", ingest_args.dir)->required();
    ingest->add_option("--out-dir", ingest_args.out_dir)->required();
    ingest->add_option("--manifest", ingest_args.manifest_path)->required();
    ingest->add_option("--min-side", ingest_args.min_side);
    ingest->add_option("--workers", ingest_args.workers);

    DedupArgs dedup_args;
    CLI::App* dedup_cmd = app.add_subcommand("dedup", "Drop near-duplicate manifest entries");
    dedup_cmd->add_option("--manifest", dedup_args.manifest_path)->required();
    dedup_cmd->add_option("--out", dedup_args.out_path)->required();
    dedup_cmd->add_option("--threshold", dedup_args.threshold);
    dedup_cmd->add_option("--workers", dedup_args.workers);

    SplitArgs split_args;
    CLI::App* split = app.add_subcommand("split", "Assign train/val splits");
    split->add_option("--manifest", split_args.manifest_path)->required();
    split->add_option("--out", split_args.out_path)->required();
    split->add_option("--train", split_args.train);
    split->add_option("--val", split_args.val);
    split->add_option("--seed", split_args.seed);

    TracksArgs tracks_args;
    CLI::App* tracks = app.add_subcommand("tracks", "Build per-category track manifests");
    tracks->add_option("--manifest", tracks_args.manifest_path)->required();
    tracks->add_option("--out-dir", tracks_args.out_dir)->required();
    tracks->add_option("--seed", tracks_args.seed);

    SampleBgArgs sample_args;
    CLI::App* sample = app.add_subcommand("sample-bg", "Assign K backgrounds per foreground");
    sample->add_option("--bg-manifest", sample_args.bg_manifest_path)->required();
    sample->add_option("--out", sample_args.out_path)->required();
    sample->add_option("--n-foregrounds", sample_args.n_foregrounds)->required();
    sample->add_option("--k", sample_args.k);
    sample->add_option("--seed", sample_args.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (rosta->parsed()) return run_rosta(rosta_args);
        if (compose->parsed()) return run_compose(compose_args);
        if (merge->parsed()) return run_merge(merge_args);
        if (ensemble->parsed()) return run_ensemble(ensemble_args);
        if (hybrid->parsed()) return run_hybrid(hybrid_args);
        if (eval_cmd->parsed()) return run_eval(eval_args);
        if (losses_cmd->parsed()) return run_losses(losses_args);
        if (ingest->parsed()) return run_ingest(ingest_args);
        if (dedup_cmd->parsed()) return run_dedup(dedup_args);
        if (split->parsed()) return run_split(split_args);
        if (tracks->parsed()) return run_tracks(tracks_args);
        if (sample->parsed()) return run_sample_bg(sample_args);
    } catch (const std::exception& e) {
        log_error(e.what());
        return kExitValidation;
    }
    return kExitValidation;
}
