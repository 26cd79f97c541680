#include <doctest.h>

#include <cmath>
#include <fstream>

#include "matkit/core/io.hpp"
#include "support/fixtures.hpp"
#include "support/jpeg_fixture.hpp"

using namespace matkit::core;

TEST_CASE("alpha PNG round trip, 16-bit default") {
    fixtures::TempDir dir("io-alpha");
    const AlphaMatte m = fixtures::random_matte(21, 14, 3);
    const std::string path = dir.file("m.png");
    save_alpha(path, m);
    const AlphaMatte back = load_alpha(path);
    REQUIRE(back.width == 21);
    REQUIRE(back.height == 14);
    for (size_t i = 0; i < m.data.size(); ++i) {
        CHECK(std::fabs(back.data[i] - m.data[i]) <= 0.51f / 65535.0f);
    }
}

TEST_CASE("alpha PNG round trip, 8-bit grid exact") {
    fixtures::TempDir dir("io-alpha8");
    const AlphaMatte m = fixtures::random_matte_8bit(17, 9, 4);
    const std::string path = dir.file("m.png");
    save_alpha(path, m, 8);
    const AlphaMatte back = load_alpha(path);
    CHECK(back.data == m.data);
}

TEST_CASE("rgb PNG round trip on the 8-bit grid") {
    fixtures::TempDir dir("io-rgb");
    const RgbImage img = fixtures::random_rgb_8bit(19, 11, 5);
    const std::string path = dir.file("img.png");
    save_rgb(path, img);
    const RgbImage back = load_rgb(path);
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    CHECK(back.data == img.data);
}

TEST_CASE("mask round trip and strictness") {
    fixtures::TempDir dir("io-mask");
    BinaryMask m(6, 5);
    for (size_t i = 0; i < m.data.size(); ++i) m.data[i] = (i % 3 == 0) ? 1 : 0;
    const std::string path = dir.file("mask.png");
    save_mask(path, m);
    const BinaryMask back = load_mask(path);
    CHECK(back.data == m.data);

    // A mid-gray plane is not a mask.
    Gray8 gray(4, 4);
    std::fill(gray.data.begin(), gray.data.end(), uint8_t{128});
    const std::string gpath = dir.file("gray.png");
    save_gray8(gpath, gray);
    CHECK_THROWS(load_mask(gpath));
    const Gray8 gback = load_gray8(gpath);
    CHECK(gback.data == gray.data);
}

TEST_CASE("gray8 preserves trimap levels exactly") {
    fixtures::TempDir dir("io-trimap");
    Gray8 tri(9, 3);
    for (size_t i = 0; i < tri.data.size(); ++i) {
        tri.data[i] = i % 3 == 0 ? 0 : (i % 3 == 1 ? 128 : 255);
    }
    const std::string path = dir.file("tri.png");
    save_gray8(path, tri);
    CHECK(load_gray8(path).data == tri.data);
}

TEST_CASE("jpeg decode: dimensions and approximate colors") {
    fixtures::TempDir dir("io-jpeg");
    const std::string path = dir.file("img.jpg");
    {
        std::ofstream out(path, std::ios::binary);
        out.write(reinterpret_cast<const char*>(fixtures::kJpeg16x12), sizeof(fixtures::kJpeg16x12));
    }
    const RgbImage img = load_rgb(path);
    REQUIRE(img.width == 16);
    REQUIRE(img.height == 12);
    // Sample away from the color boundary; JPEG is lossy so allow slack.
    CHECK(std::fabs(img.at(2, 6, 0) - 200.0f / 255) < 0.1f);
    CHECK(std::fabs(img.at(2, 6, 2) - 40.0f / 255) < 0.1f);
    CHECK(std::fabs(img.at(13, 6, 2) - 220.0f / 255) < 0.1f);
    CHECK(std::fabs(img.at(13, 6, 0) - 30.0f / 255) < 0.1f);
}

TEST_CASE("loaders reject what they should") {
    fixtures::TempDir dir("io-reject");
    CHECK_THROWS(load_rgb(dir.file("missing.png")));
    CHECK_THROWS(load_alpha(dir.file("missing.png")));

    // Color PNG is not a valid alpha plane.
    const std::string color = dir.file("color.png");
    save_rgb(color, fixtures::random_rgb_8bit(5, 5, 9));
    CHECK_THROWS(load_alpha(color));
    CHECK_THROWS(load_gray8(color));

    // Unsupported extension.
    const std::string weird = dir.file("file.bmp");
    {
        std::ofstream out(weird, std::ios::binary);
        out << "notanimage";
    }
    CHECK_THROWS(load_rgb(weird));
}

TEST_CASE("grayscale PNG feeds rgb loads as a gray triplet") {
    fixtures::TempDir dir("io-gray-rgb");
    Gray8 g(6, 4);
    for (size_t i = 0; i < g.data.size(); ++i) g.data[i] = static_cast<uint8_t>(i * 10);
    const std::string path = dir.file("g.png");
    save_gray8(path, g);
    const RgbImage img = load_rgb(path);
    REQUIRE(img.width == 6);
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 6; ++x) {
            const float expected = static_cast<float>(g.at(x, y)) / 255.0f;
            CHECK(img.at(x, y, 0) == expected);
            CHECK(img.at(x, y, 1) == expected);
            CHECK(img.at(x, y, 2) == expected);
        }
    }
}

TEST_CASE("has_extension is case-insensitive") {
    CHECK(has_extension("a/b/photo.PNG", ".png"));
    CHECK(has_extension("x.JpEg", ".jpeg"));
    CHECK_FALSE(has_extension("x.jpegg", ".jpeg"));
    CHECK_FALSE(has_extension("png", ".png"));
}
