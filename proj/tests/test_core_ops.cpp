#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "matkit/core/ops.hpp"
#include "matkit/core/rng.hpp"
#include "support/fixtures.hpp"

using namespace matkit::core;

namespace {

BinaryMask random_mask(int w, int h, uint64_t seed) {
    Rng rng(seed);
    BinaryMask m(w, h);
    for (auto& v : m.data) v = rng.next_below(2) ? 1 : 0;
    return m;
}

// Direct window sweep, replicate border via index clamping.
BinaryMask brute_morph(const BinaryMask& mask, int k, bool take_max) {
    const int r = k / 2;
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            uint8_t v = take_max ? 0 : 1;
            for (int dy = -r; dy <= r; ++dy) {
                const int sy = std::clamp(y + dy, 0, mask.height - 1);
                for (int dx = -r; dx <= r; ++dx) {
                    const int sx = std::clamp(x + dx, 0, mask.width - 1);
                    const uint8_t s = mask.at(sx, sy);
                    v = take_max ? std::max(v, s) : std::min(v, s);
                }
            }
            out.at(x, y) = v;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("erode and dilate match a direct window sweep") {
    for (uint64_t seed : {11u, 12u, 13u}) {
        const BinaryMask m = random_mask(37, 23, seed);
        for (int k : {1, 3, 7, 15}) {
            CHECK(erode(m, k).data == brute_morph(m, k, false).data);
            CHECK(dilate(m, k).data == brute_morph(m, k, true).data);
        }
    }
}

TEST_CASE("morphology rejects even and non-positive kernels") {
    const BinaryMask m(8, 8, 1);
    CHECK_THROWS(erode(m, 2));
    CHECK_THROWS(dilate(m, 0));
    CHECK_THROWS(erode(m, -3));
}

TEST_CASE("dilate of a single pixel is a square") {
    BinaryMask m(61, 61);
    m.at(30, 30) = 1;
    const BinaryMask d = dilate(m, 25);
    size_t on = 0;
    for (int y = 0; y < 61; ++y) {
        for (int x = 0; x < 61; ++x) {
            const bool inside = std::abs(x - 30) <= 12 && std::abs(y - 30) <= 12;
            CHECK(d.at(x, y) == (inside ? 1 : 0));
            on += d.at(x, y);
        }
    }
    CHECK(on == 25u * 25u);
}

TEST_CASE("logical helpers") {
    BinaryMask a(4, 1), b(4, 1);
    a.data = {0, 0, 1, 1};
    b.data = {0, 1, 0, 1};
    CHECK(logical_not(a).data == std::vector<uint8_t>{1, 1, 0, 0});
    CHECK(logical_and(a, b).data == std::vector<uint8_t>{0, 0, 0, 1});
    CHECK(logical_and_not(a, b).data == std::vector<uint8_t>{0, 0, 1, 0});
    const BinaryMask c(3, 1);
    CHECK_THROWS(logical_and(a, c));
}

TEST_CASE("resize is identity at equal dimensions and preserves constants") {
    const AlphaMatte m = fixtures::random_matte(13, 9, 77);
    const AlphaMatte same = resize(m, 13, 9);
    CHECK(same.data == m.data);

    const AlphaMatte flat(10, 10, 0.625f);
    const AlphaMatte up = resize(flat, 23, 17);
    for (float v : up.data) CHECK(v == doctest::Approx(0.625f).epsilon(1e-6));
}

TEST_CASE("resize downsamples by averaging neighbours at half-pixel centers") {
    AlphaMatte m(2, 1);
    m.data = {0.0f, 1.0f};
    const AlphaMatte down = resize(m, 1, 1);
    CHECK(down.data[0] == doctest::Approx(0.5f));

    // 4 -> 2 along x: output centers land at source coords 0.5 and 2.5.
    AlphaMatte row(4, 1);
    row.data = {0.0f, 0.4f, 0.8f, 1.0f};
    const AlphaMatte half = resize(row, 2, 1);
    CHECK(half.data[0] == doctest::Approx(0.2f));
    CHECK(half.data[1] == doctest::Approx(0.9f));
}

TEST_CASE("conv2d matches a table-driven check and rejects even kernels") {
    AlphaMatte img(3, 3);
    img.data = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    // Identity kernel.
    const std::vector<float> ident = {0, 0, 0, 0, 1, 0, 0, 0, 0};
    CHECK(conv2d(img, ident, 3, 3).data == img.data);

    // Shift-left kernel picks the right neighbour; replicate at the border.
    const std::vector<float> shift = {0, 0, 0, 0, 0, 1, 0, 0, 0};
    const AlphaMatte s = conv2d(img, shift, 3, 3);
    CHECK(s.at(0, 0) == 2.0f);
    CHECK(s.at(2, 0) == 3.0f);  // clamped
    CHECK(s.at(1, 2) == 9.0f);

    CHECK_THROWS(conv2d(img, std::vector<float>(4, 0.25f), 2, 2));
}

TEST_CASE("pyramid reduce halves sizes with ceil and is a fixed point at 1x1") {
    const AlphaMatte m = fixtures::random_matte(9, 6, 5);
    const AlphaMatte r = pyramid_reduce(m);
    CHECK(r.width == 5);
    CHECK(r.height == 3);

    AlphaMatte one(1, 1);
    one.data[0] = 0.37f;
    const AlphaMatte r1 = pyramid_reduce(one);
    CHECK(r1.width == 1);
    CHECK(r1.height == 1);
    CHECK(r1.data[0] == doctest::Approx(0.37f));
}

TEST_CASE("laplacian pyramid reconstructs the input") {
    for (auto [w, h] : {std::pair{32, 32}, std::pair{33, 27}, std::pair{16, 16}}) {
        const AlphaMatte m = fixtures::random_matte(w, h, 1000 + w);
        const LaplacianPyramid pyr = laplacian_pyramid(m, 4);
        CHECK(pyr.bands.size() == 4);
        const AlphaMatte back = laplacian_reconstruct(pyr);
        REQUIRE(back.data.size() == m.data.size());
        for (size_t i = 0; i < m.data.size(); ++i) {
            CHECK(std::fabs(back.data[i] - m.data[i]) < 1e-6f);
        }
    }
}

TEST_CASE("laplacian pyramid size precondition") {
    const AlphaMatte m(7, 32, 0.5f);
    CHECK_THROWS(laplacian_pyramid(m, 4));  // needs min side 8
    CHECK_NOTHROW(laplacian_pyramid(m, 3));
    CHECK_THROWS(laplacian_pyramid(m, 0));
}

TEST_CASE("connected components: 4-connectivity, dense labels, sizes") {
    BinaryMask m(5, 4);
    // Two regions: an L shape and a diagonal pixel that must NOT join it.
    //   1 1 0 0 0
    //   1 0 0 1 1
    //   1 0 1 0 0
    //   0 0 0 0 0
    m.data = {1, 1, 0, 0, 0, 1, 0, 0, 1, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0};
    const ConnectedComponents cc = connected_components(m);
    CHECK(cc.count == 3);
    CHECK(cc.sizes == std::vector<size_t>{4, 2, 1});
    CHECK(cc.labels[0] == 1);
    CHECK(cc.labels[8] == 2);   // the pair at (3,1),(4,1)
    CHECK(cc.labels[12] == 3);  // lone pixel at (2,2)
    CHECK(cc.labels[1] == 1);
    CHECK(cc.labels[19] == 0);
}

TEST_CASE("shuffle is deterministic and a permutation") {
    std::vector<int> a{1, 2, 3, 4, 5, 6, 7};
    std::vector<int> b = a;
    Rng r1(42), r2(42);
    shuffle(a, r1);
    shuffle(b, r2);
    CHECK(a == b);
    std::vector<int> sorted = a;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("mix_seed separates streams") {
    CHECK(mix_seed(1, 2) != mix_seed(2, 1));
    CHECK(mix_seed(1, 2, 3) != mix_seed(1, 3, 2));
    CHECK(mix_seed(0, 0) == mix_seed(0, 0));
}
