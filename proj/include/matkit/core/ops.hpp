#pragma once

#include <cstdint>
#include <vector>

#include "matkit/core/image.hpp"

namespace matkit::core {

// Morphology with a k x k square structuring element, replicate border.
// k must be odd and >= 1.
BinaryMask erode(const BinaryMask& mask, int k);
BinaryMask dilate(const BinaryMask& mask, int k);

BinaryMask logical_not(const BinaryMask& mask);
BinaryMask logical_and(const BinaryMask& a, const BinaryMask& b);
BinaryMask logical_and_not(const BinaryMask& a, const BinaryMask& b);  // a AND NOT b

// Bilinear resize with half-pixel sample centers; constants are preserved and
// equal dimensions give the identity.
RgbImage resize(const RgbImage& img, int target_w, int target_h);
AlphaMatte resize(const AlphaMatte& img, int target_w, int target_h);

// 2D convolution with an odd-sized kernel, replicate border. The kernel is
// indexed kernel[ky * kw + kx] and is applied in correlation orientation.
AlphaMatte conv2d(const AlphaMatte& img, const std::vector<float>& kernel, int kw, int kh);

// Burt-Adelson pyramid: 5-tap binomial [1,4,6,4,1]/16 reduce to ceil(n/2),
// bilinear expand back to an explicit target size.
AlphaMatte pyramid_reduce(const AlphaMatte& img);
AlphaMatte pyramid_expand(const AlphaMatte& img, int target_w, int target_h);

// bands[k] = reduce^k(img) - expand(reduce^(k+1)(img)); residual = reduce^levels(img).
// Reconstruction: bands[0] + expand(bands[1] + expand(... + expand(residual))).
struct LaplacianPyramid {
    std::vector<AlphaMatte> bands;
    AlphaMatte residual;
};

LaplacianPyramid laplacian_pyramid(const AlphaMatte& img, int levels = 5);
AlphaMatte laplacian_reconstruct(const LaplacianPyramid& pyr);

struct ConnectedComponents {
    std::vector<int32_t> labels;     // 0 for unset pixels, components dense from 1
    std::vector<size_t> sizes;       // sizes[i] is the pixel count of label i+1
    int count = 0;
};

ConnectedComponents connected_components(const BinaryMask& mask);  // 4-connectivity

}  // namespace matkit::core
