#include "matkit/datasets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "matkit/core/io.hpp"
#include "matkit/core/ops.hpp"
#include "matkit/core/parallel.hpp"
#include "matkit/core/rng.hpp"

namespace matkit::datasets {

namespace fs = std::filesystem;

namespace {

constexpr int kThumb = 32;
constexpr int kBand = 8;

const char* kRoles[] = {"original", "foreground", "alpha", "background"};
const char* kSplits[] = {"train", "val", "test"};
const char* kTracks[] = {"ORI", "COMP-COCO-style", "COMP-BG", "COMP-RSSN"};

template <size_t N>
bool contains(const char* const (&values)[N], const std::string& v) {
    return std::find(std::begin(values), std::end(values), v) != std::end(values);
}

std::string hash_to_hex(uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[h & 0xf];
        h >>= 4;
    }
    return s;
}

uint64_t hex_to_hash(const std::string& s) {
    if (s.size() != 16) throw std::runtime_error("bad hash encoding: " + s);
    return std::stoull(s, nullptr, 16);
}

// Area-average the luma plane down to the thumbnail grid; cell boundaries
// are floor(i * extent / kThumb).
std::array<double, kThumb * kThumb> luma_thumbnail(const RgbImage& image) {
    const int w = image.width, h = image.height;
    std::vector<double> integral(static_cast<size_t>(w + 1) * (h + 1), 0.0);
    for (int y = 0; y < h; ++y) {
        double row = 0.0;
        for (int x = 0; x < w; ++x) {
            const size_t i = (static_cast<size_t>(y) * w + x) * 3;
            row += 0.299 * image.data[i] + 0.587 * image.data[i + 1] + 0.114 * image.data[i + 2];
            integral[static_cast<size_t>(y + 1) * (w + 1) + x + 1] =
                integral[static_cast<size_t>(y) * (w + 1) + x + 1] + row;
        }
    }
    auto rect_sum = [&](int x0, int y0, int x1, int y1) {
        return integral[static_cast<size_t>(y1) * (w + 1) + x1] -
               integral[static_cast<size_t>(y0) * (w + 1) + x1] -
               integral[static_cast<size_t>(y1) * (w + 1) + x0] +
               integral[static_cast<size_t>(y0) * (w + 1) + x0];
    };
    std::array<double, kThumb * kThumb> thumb{};
    for (int ty = 0; ty < kThumb; ++ty) {
        int y0 = ty * h / kThumb;
        int y1 = std::max(y0 + 1, (ty + 1) * h / kThumb);
        y1 = std::min(y1, h);
        y0 = std::min(y0, y1 - 1);
        for (int tx = 0; tx < kThumb; ++tx) {
            int x0 = tx * w / kThumb;
            int x1 = std::max(x0 + 1, (tx + 1) * w / kThumb);
            x1 = std::min(x1, w);
            x0 = std::min(x0, x1 - 1);
            thumb[static_cast<size_t>(ty) * kThumb + tx] =
                rect_sum(x0, y0, x1, y1) / (static_cast<double>(x1 - x0) * (y1 - y0));
        }
    }
    return thumb;
}

const std::array<std::array<double, kThumb>, kThumb>& dct_matrix() {
    static const auto m = [] {
        std::array<std::array<double, kThumb>, kThumb> t{};
        for (int k = 0; k < kThumb; ++k) {
            const double scale = k == 0 ? std::sqrt(1.0 / kThumb) : std::sqrt(2.0 / kThumb);
            for (int n = 0; n < kThumb; ++n) {
                t[k][n] = scale * std::cos(M_PI * (2 * n + 1) * k / (2.0 * kThumb));
            }
        }
        return t;
    }();
    return m;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

bool is_image_file(const fs::path& p) {
    const std::string ext = p.extension().string();
    std::string lower;
    for (char c : ext) lower.push_back(static_cast<char>(std::tolower(c)));
    return lower == ".png" || lower == ".jpg" || lower == ".jpeg";
}

struct DisjointSets {
    std::vector<int> parent;

    explicit DisjointSets(size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

bool valid_role(const std::string& role) { return contains(kRoles, role); }
bool valid_split(const std::string& split) { return contains(kSplits, split); }
bool valid_track(const std::string& track) { return contains(kTracks, track); }

std::string to_json_line(const ManifestEntry& entry) {
    nlohmann::ordered_json j;
    j["id"] = entry.id;
    j["role"] = entry.role;
    j["path"] = entry.path;
    j["width"] = entry.width;
    j["height"] = entry.height;
    j["category"] = entry.category;
    j["split"] = entry.split;
    j["track"] = entry.track;
    j["phash"] = entry.has_phash ? hash_to_hex(entry.phash) : "";
    return j.dump();
}

ManifestEntry entry_from_json(const std::string& line) {
    const nlohmann::json j = nlohmann::json::parse(line);
    ManifestEntry e;
    e.id = j.at("id").get<std::string>();
    e.role = j.at("role").get<std::string>();
    e.path = j.at("path").get<std::string>();
    e.width = j.at("width").get<int>();
    e.height = j.at("height").get<int>();
    e.category = j.value("category", "");
    e.split = j.value("split", "");
    e.track = j.value("track", "");
    const std::string hash = j.value("phash", "");
    if (!hash.empty()) {
        e.phash = hex_to_hash(hash);
        e.has_phash = true;
    }
    if (!valid_role(e.role)) throw std::runtime_error("unknown role: " + e.role);
    if (!e.split.empty() && !valid_split(e.split)) {
        throw std::runtime_error("unknown split: " + e.split);
    }
    if (!e.track.empty() && !valid_track(e.track)) {
        throw std::runtime_error("unknown track: " + e.track);
    }
    return e;
}

void save_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    for (const ManifestEntry& e : entries) out << to_json_line(e) << "\n";
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read manifest: " + path);
    std::vector<ManifestEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        entries.push_back(entry_from_json(line));
    }
    return entries;
}

uint64_t compute_phash(const RgbImage& image) {
    const std::array<double, kThumb * kThumb> thumb = luma_thumbnail(image);
    const auto& t = dct_matrix();
    // Only the top-left kBand x kBand block of T * thumb * T' is needed.
    std::array<double, kBand * kThumb> partial{};
    for (int k = 0; k < kBand; ++k) {
        for (int x = 0; x < kThumb; ++x) {
            double acc = 0.0;
            for (int n = 0; n < kThumb; ++n) acc += t[k][n] * thumb[static_cast<size_t>(n) * kThumb + x];
            partial[static_cast<size_t>(k) * kThumb + x] = acc;
        }
    }
    std::array<double, kBand * kBand> band{};
    for (int y = 0; y < kBand; ++y) {
        for (int k = 0; k < kBand; ++k) {
            double acc = 0.0;
            for (int n = 0; n < kThumb; ++n) acc += partial[static_cast<size_t>(y) * kThumb + n] * t[k][n];
            band[static_cast<size_t>(y) * kBand + k] = acc;
        }
    }
    std::array<double, kBand * kBand - 1> rest{};
    std::copy(band.begin() + 1, band.end(), rest.begin());
    std::nth_element(rest.begin(), rest.begin() + rest.size() / 2, rest.end());
    const double median = rest[rest.size() / 2];
    uint64_t hash = 0;
    for (size_t i = 0; i < band.size(); ++i) {
        if (band[i] > median) hash |= uint64_t{1} << i;
    }
    return hash;
}

int hamming_distance(uint64_t a, uint64_t b) { return std::popcount(a ^ b); }

IngestOutcome ingest_backgrounds(const std::string& dir, const std::string& out_dir, int min_side,
                                 int workers) {
    if (min_side < 1) throw std::invalid_argument("min_side must be >= 1");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && is_image_file(e.path())) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    fs::create_directories(out_dir);

    struct Slot {
        int state = 0;  // 0 accepted, 1 rejected, 2 failed
        ManifestEntry entry;
        std::string message;
    };
    std::vector<Slot> slots(files.size());
    core::parallel_for(files.size(), workers, [&](size_t i) {
        Slot& slot = slots[i];
        try {
            RgbImage img = core::load_rgb(files[i].string());
            const int shortest = std::min(img.width, img.height);
            if (shortest < min_side) {
                slot.state = 1;
                slot.message = "shortest side " + std::to_string(shortest) + " below " +
                               std::to_string(min_side);
                return;
            }
            if (shortest != min_side) {
                const double scale = static_cast<double>(min_side) / shortest;
                int tw, th;
                if (img.width <= img.height) {
                    tw = min_side;
                    th = static_cast<int>(std::llround(img.height * scale));
                } else {
                    th = min_side;
                    tw = static_cast<int>(std::llround(img.width * scale));
                }
                img = core::resize(img, tw, th);
            }
            ManifestEntry e;
            e.id = files[i].stem().string();
            e.role = "background";
            e.path = (fs::path(out_dir) / (e.id + ".png")).string();
            e.width = img.width;
            e.height = img.height;
            e.phash = compute_phash(img);
            e.has_phash = true;
            core::save_rgb(e.path, img);
            slot.entry = std::move(e);
        } catch (const std::exception& ex) {
            slot.state = 2;
            slot.message = ex.what();
        }
    });

    IngestOutcome out;
    for (size_t i = 0; i < slots.size(); ++i) {
        switch (slots[i].state) {
            case 0: out.accepted.push_back(std::move(slots[i].entry)); break;
            case 1: out.rejected.emplace_back(files[i].string(), slots[i].message); break;
            default: out.failed.emplace_back(files[i].string(), slots[i].message);
        }
    }
    return out;
}

std::vector<ManifestEntry> dedup(const std::vector<ManifestEntry>& entries,
                                 int hamming_threshold) {
    const size_t n = entries.size();
    for (const ManifestEntry& e : entries) {
        if (!e.has_phash) {
            throw std::invalid_argument("dedup requires a hash on every entry (missing on " +
                                        e.id + ")");
        }
    }
    DisjointSets sets(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (hamming_distance(entries[i].phash, entries[j].phash) <= hamming_threshold) {
                sets.unite(static_cast<int>(i), static_cast<int>(j));
            }
        }
    }
    std::vector<int> keeper(n);
    std::iota(keeper.begin(), keeper.end(), 0);
    for (size_t i = 0; i < n; ++i) {
        const int root = sets.find(static_cast<int>(i));
        if (entries[i].id < entries[keeper[root]].id) keeper[root] = static_cast<int>(i);
    }
    std::vector<ManifestEntry> out;
    for (size_t i = 0; i < n; ++i) {
        if (keeper[sets.find(static_cast<int>(i))] == static_cast<int>(i)) {
            out.push_back(entries[i]);
        }
    }
    return out;
}

std::vector<ManifestEntry> split_backgrounds(const std::vector<ManifestEntry>& entries,
                                             size_t train, size_t val, uint64_t seed) {
    if (entries.size() < train + val) {
        throw std::invalid_argument("split needs " + std::to_string(train + val) +
                                    " entries, got " + std::to_string(entries.size()));
    }
    std::vector<ManifestEntry> out = entries;
    std::sort(out.begin(), out.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
    core::Rng rng(seed);
    core::shuffle(out, rng);
    for (size_t i = 0; i < out.size(); ++i) {
        if (i < train) {
            out[i].split = "train";
        } else if (i < train + val) {
            out[i].split = "val";
        } else {
            out[i].split.clear();
        }
    }
    return out;
}

TrackManifests make_tracks(const std::vector<ManifestEntry>& entries, uint64_t seed) {
    std::map<std::string, std::vector<ManifestEntry>> by_category;
    for (const ManifestEntry& e : entries) by_category[e.category].push_back(e);

    TrackManifests tracks;
    for (auto& [category, members] : by_category) {
        if (members.size() < 2) {
            throw std::invalid_argument("category '" + category +
                                        "' has fewer than 2 images");
        }
        std::sort(members.begin(), members.end(),
                  [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
        core::Rng rng(core::mix_seed(seed, fnv1a(category)));
        core::shuffle(members, rng);
        const size_t train = members.size() * 9 / 10;
        for (size_t i = 0; i < members.size(); ++i) {
            members[i].split = i < train ? "train" : "val";
            members[i].track = "ORI";
            tracks.ori.push_back(members[i]);
        }
    }
    std::sort(tracks.ori.begin(), tracks.ori.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
    tracks.comp_coco = tracks.ori;
    for (ManifestEntry& e : tracks.comp_coco) e.track = "COMP-COCO-style";
    tracks.comp_bg = tracks.ori;
    for (ManifestEntry& e : tracks.comp_bg) e.track = "COMP-BG";
    tracks.comp_rssn = tracks.ori;
    for (ManifestEntry& e : tracks.comp_rssn) e.track = "COMP-RSSN";
    return tracks;
}

std::vector<std::vector<std::string>> sample_backgrounds(
    const std::vector<ManifestEntry>& backgrounds, size_t n_foregrounds, int K, uint64_t seed) {
    if (K < 0 || backgrounds.size() < static_cast<size_t>(K)) {
        throw std::invalid_argument("background pool smaller than K");
    }
    std::vector<std::string> pool;
    pool.reserve(backgrounds.size());
    for (const ManifestEntry& e : backgrounds) pool.push_back(e.id);
    std::sort(pool.begin(), pool.end());

    std::vector<std::vector<std::string>> table(n_foregrounds);
    for (size_t row = 0; row < n_foregrounds; ++row) {
        core::Rng rng(core::mix_seed(seed, row));
        std::vector<std::string> ids = pool;
        for (int i = 0; i < K; ++i) {
            const size_t j = i + rng.next_below(ids.size() - i);
            std::swap(ids[i], ids[j]);
        }
        ids.resize(K);
        table[row] = std::move(ids);
    }
    return table;
}

}  // namespace matkit::datasets
