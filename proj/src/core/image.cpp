#include "matkit/core/image.hpp"

namespace matkit::core {

namespace {

void check_range(const std::vector<float>& data, const std::string& what) {
    for (float v : data) {
        if (!(v >= 0.0f && v <= 1.0f)) {
            throw std::invalid_argument(what + ": value outside [0,1]");
        }
    }
}

}  // namespace

void require_unit_range(const RgbImage& img, const std::string& what) {
    if (img.width < 1 || img.height < 1 ||
        img.data.size() != static_cast<size_t>(img.width) * img.height * 3) {
        throw std::invalid_argument(what + ": malformed image");
    }
    check_range(img.data, what);
}

void require_unit_range(const AlphaMatte& alpha, const std::string& what) {
    if (alpha.width < 1 || alpha.height < 1 ||
        alpha.data.size() != static_cast<size_t>(alpha.width) * alpha.height) {
        throw std::invalid_argument(what + ": malformed matte");
    }
    check_range(alpha.data, what);
}

void require_binary(const BinaryMask& mask, const std::string& what) {
    if (mask.width < 1 || mask.height < 1 ||
        mask.data.size() != static_cast<size_t>(mask.width) * mask.height) {
        throw std::invalid_argument(what + ": malformed mask");
    }
    for (uint8_t v : mask.data) {
        if (v > 1) throw std::invalid_argument(what + ": mask value not in {0,1}");
    }
}

}  // namespace matkit::core
