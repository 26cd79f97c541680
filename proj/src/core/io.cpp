#include "matkit/core/io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace matkit::core {

namespace {

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw std::runtime_error("cannot open file: " + path);
    return f;
}

struct PngBuffer {
    int width = 0;
    int height = 0;
    int channels = 0;   // 1 or 3
    int bit_depth = 0;  // 8 or 16
    std::vector<uint8_t> rows;  // packed scanlines, 16-bit values big-endian
};

// Full libpng read with explicit transforms; the simplified API applies
// gamma conversions that would break the exact /255 and /65535 scaling.
PngBuffer read_png(const std::string& path, bool want_rgb) {
    FilePtr f = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }
    PngBuffer buf;
    std::vector<png_bytep> row_ptrs;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("failed to decode PNG: " + path);
    }
    png_init_io(png, f.get());
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (want_rgb) {
        if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
            png_set_gray_to_rgb(png);
        }
        png_set_strip_16(png);
    } else {
        if (color_type == PNG_COLOR_TYPE_RGB || color_type == PNG_COLOR_TYPE_RGB_ALPHA ||
            color_type == PNG_COLOR_TYPE_PALETTE) {
            png_destroy_read_struct(&png, &info, nullptr);
            throw std::runtime_error("expected grayscale PNG: " + path);
        }
    }
    png_read_update_info(png, info);

    buf.width = static_cast<int>(png_get_image_width(png, info));
    buf.height = static_cast<int>(png_get_image_height(png, info));
    buf.channels = static_cast<int>(png_get_channels(png, info));
    buf.bit_depth = static_cast<int>(png_get_bit_depth(png, info));
    const size_t row_bytes = png_get_rowbytes(png, info);
    buf.rows.resize(row_bytes * buf.height);
    row_ptrs.resize(buf.height);
    for (int y = 0; y < buf.height; ++y) {
        row_ptrs[y] = buf.rows.data() + row_bytes * y;
    }
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return buf;
}

void write_png(const std::string& path, int width, int height, int channels, int bit_depth,
               const std::vector<uint8_t>& rows) {
    FilePtr f = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }
    std::vector<png_bytep> row_ptrs(height);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("failed to encode PNG: " + path);
    }
    png_init_io(png, f.get());
    const int color = channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
    png_set_IHDR(png, info, width, height, bit_depth, color, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const size_t row_bytes = static_cast<size_t>(width) * channels * (bit_depth / 8);
    for (int y = 0; y < height; ++y) {
        row_ptrs[y] = const_cast<png_bytep>(rows.data() + row_bytes * y);
    }
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    longjmp(err->jump, 1);
}

RgbImage load_jpeg(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    jpeg_decompress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw std::runtime_error("failed to decode JPEG: " + path);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, f.get());
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    RgbImage img(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height));
    std::vector<uint8_t> row(static_cast<size_t>(cinfo.output_width) * 3);
    JSAMPROW rowp = row.data();
    while (cinfo.output_scanline < cinfo.output_height) {
        const int y = static_cast<int>(cinfo.output_scanline);
        jpeg_read_scanlines(&cinfo, &rowp, 1);
        for (size_t i = 0; i < row.size(); ++i) {
            img.data[static_cast<size_t>(y) * cinfo.output_width * 3 + i] =
                static_cast<float>(row[i]) / 255.0f;
        }
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

uint16_t read_be16(const uint8_t* p) {
    return static_cast<uint16_t>((p[0] << 8) | p[1]);
}

uint8_t quantize8(float v) {
    return static_cast<uint8_t>(std::lround(clamp01(v) * 255.0f));
}

}  // namespace

bool has_extension(const std::string& path, const std::string& ext) {
    if (path.size() < ext.size()) return false;
    const std::string tail = path.substr(path.size() - ext.size());
    return std::equal(tail.begin(), tail.end(), ext.begin(), ext.end(),
                      [](char a, char b) { return std::tolower(a) == std::tolower(b); });
}

RgbImage load_rgb(const std::string& path) {
    if (has_extension(path, ".jpg") || has_extension(path, ".jpeg")) {
        return load_jpeg(path);
    }
    PngBuffer buf = read_png(path, true);
    RgbImage img(buf.width, buf.height);
    for (size_t i = 0; i < img.data.size(); ++i) {
        img.data[i] = static_cast<float>(buf.rows[i]) / 255.0f;
    }
    return img;
}

AlphaMatte load_alpha(const std::string& path) {
    PngBuffer buf = read_png(path, false);
    AlphaMatte matte(buf.width, buf.height);
    const size_t n = matte.data.size();
    if (buf.bit_depth == 16) {
        for (size_t i = 0; i < n; ++i) {
            matte.data[i] = static_cast<float>(read_be16(buf.rows.data() + 2 * i)) / 65535.0f;
        }
    } else {
        for (size_t i = 0; i < n; ++i) {
            matte.data[i] = static_cast<float>(buf.rows[i]) / 255.0f;
        }
    }
    return matte;
}

BinaryMask load_mask(const std::string& path) {
    Gray8 g = load_gray8(path);
    BinaryMask mask(g.width, g.height);
    for (size_t i = 0; i < g.data.size(); ++i) {
        if (g.data[i] == 0) {
            mask.data[i] = 0;
        } else if (g.data[i] == 255) {
            mask.data[i] = 1;
        } else {
            throw std::runtime_error("mask PNG contains values other than 0/255: " + path);
        }
    }
    return mask;
}

Gray8 load_gray8(const std::string& path) {
    PngBuffer buf = read_png(path, false);
    Gray8 g(buf.width, buf.height);
    const size_t n = g.data.size();
    if (buf.bit_depth == 16) {
        for (size_t i = 0; i < n; ++i) {
            g.data[i] = static_cast<uint8_t>(read_be16(buf.rows.data() + 2 * i) >> 8);
        }
    } else {
        std::copy(buf.rows.begin(), buf.rows.begin() + n, g.data.begin());
    }
    return g;
}

void save_rgb(const std::string& path, const RgbImage& img) {
    std::vector<uint8_t> rows(img.data.size());
    for (size_t i = 0; i < img.data.size(); ++i) rows[i] = quantize8(img.data[i]);
    write_png(path, img.width, img.height, 3, 8, rows);
}

void save_alpha(const std::string& path, const AlphaMatte& matte, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) {
        throw std::invalid_argument("save_alpha: bit depth must be 8 or 16");
    }
    if (bit_depth == 8) {
        std::vector<uint8_t> rows(matte.data.size());
        for (size_t i = 0; i < matte.data.size(); ++i) rows[i] = quantize8(matte.data[i]);
        write_png(path, matte.width, matte.height, 1, 8, rows);
        return;
    }
    std::vector<uint8_t> rows(matte.data.size() * 2);
    for (size_t i = 0; i < matte.data.size(); ++i) {
        const auto v = static_cast<uint16_t>(std::lround(clamp01(matte.data[i]) * 65535.0f));
        rows[2 * i] = static_cast<uint8_t>(v >> 8);
        rows[2 * i + 1] = static_cast<uint8_t>(v & 0xff);
    }
    write_png(path, matte.width, matte.height, 1, 16, rows);
}

void save_mask(const std::string& path, const BinaryMask& mask) {
    require_binary(mask, "save_mask input");
    std::vector<uint8_t> rows(mask.data.size());
    for (size_t i = 0; i < mask.data.size(); ++i) rows[i] = mask.data[i] ? 255 : 0;
    write_png(path, mask.width, mask.height, 1, 8, rows);
}

void save_gray8(const std::string& path, const Gray8& img) {
    write_png(path, img.width, img.height, 1, 8, img.data);
}

}  // namespace matkit::core
