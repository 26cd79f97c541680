#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "matkit/core/image.hpp"

namespace matkit::datasets {

using core::RgbImage;

struct ManifestEntry {
    std::string id;
    std::string role;  // original | foreground | alpha | background
    std::string path;
    int width = 0;
    int height = 0;
    std::string category;  // optional
    std::string split;     // train | val | test, empty until assigned
    std::string track;     // ORI | COMP-COCO-style | COMP-BG | COMP-RSSN
    uint64_t phash = 0;
    bool has_phash = false;
};

bool valid_role(const std::string& role);
bool valid_split(const std::string& split);
bool valid_track(const std::string& track);

std::string to_json_line(const ManifestEntry& entry);
ManifestEntry entry_from_json(const std::string& line);
void save_manifest(const std::string& path, const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> load_manifest(const std::string& path);

// 64-bit DCT hash: 32x32 luma thumbnail by area averaging, 2D DCT, top-left
// 8x8 band, bits set where a coefficient exceeds the median of the 63
// non-DC coefficients.
uint64_t compute_phash(const RgbImage& image);
int hamming_distance(uint64_t a, uint64_t b);

struct IngestOutcome {
    std::vector<ManifestEntry> accepted;
    std::vector<std::pair<std::string, std::string>> rejected;  // path, reason
    std::vector<std::pair<std::string, std::string>> failed;    // path, error
};

// Scans dir for png/jpg files, rejects images whose shortest side is below
// min_side, rescales survivors so the shortest side is exactly min_side
// (aspect preserved, longer side rounded half away from zero), writes them
// as PNG into out_dir, and returns manifest rows with hashes.
IngestOutcome ingest_backgrounds(const std::string& dir, const std::string& out_dir,
                                 int min_side = 1080, int workers = 1);

// Removes near-duplicates: entries whose hashes are within the Hamming
// threshold (transitively) form one cluster; the lexicographically smallest
// id in each cluster survives. Entries must carry hashes.
std::vector<ManifestEntry> dedup(const std::vector<ManifestEntry>& entries,
                                 int hamming_threshold = 4);

// Sorts by id, applies a seeded shuffle, then labels the first `train`
// entries train and the next `val` entries val.
std::vector<ManifestEntry> split_backgrounds(const std::vector<ManifestEntry>& entries,
                                             size_t train, size_t val, uint64_t seed);

struct TrackManifests {
    std::vector<ManifestEntry> ori;
    std::vector<ManifestEntry> comp_coco;  // plain blend, COCO-style backgrounds
    std::vector<ManifestEntry> comp_bg;    // plain blend, curated backgrounds
    std::vector<ManifestEntry> comp_rssn;  // full composition route
};

// Stratified per-category 9:1 train/val split (train count floored), then
// mirrored into the three composition tracks.
TrackManifests make_tracks(const std::vector<ManifestEntry>& entries, uint64_t seed);

// K distinct background ids per foreground, reproducible from the seed; each
// row is drawn from an independent derived stream.
std::vector<std::vector<std::string>> sample_backgrounds(
    const std::vector<ManifestEntry>& backgrounds, size_t n_foregrounds, int K, uint64_t seed);

}  // namespace matkit::datasets
