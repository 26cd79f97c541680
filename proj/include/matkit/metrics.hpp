#pragma once

#include <string>

#include "matkit/core/image.hpp"
#include "matkit/rosta.hpp"

namespace matkit::metrics {

using core::AlphaMatte;

struct RegionSad {
    double tran = 0.0;
    double fg = 0.0;
    double bg = 0.0;
};

struct MetricReport {
    double sad = 0.0;   // sum of absolute differences, in thousands
    double mse = 0.0;   // mean squared difference
    double mad = 0.0;   // mean absolute difference
    double grad = 0.0;  // gradient error, in thousands
    double conn = 0.0;  // connectivity error, in thousands
    double sad_tran = 0.0;
    double sad_fg = 0.0;
    double sad_bg = 0.0;
    std::string regions_source;
};

double sad(const AlphaMatte& pred, const AlphaMatte& gt);
double mse(const AlphaMatte& pred, const AlphaMatte& gt);
double mad(const AlphaMatte& pred, const AlphaMatte& gt);

// SAD restricted to the TT trimap regions of `regions` (kind must be TT).
RegionSad region_sad(const AlphaMatte& pred, const AlphaMatte& gt, const rosta::RostaMask& regions);

double grad_error(const AlphaMatte& pred, const AlphaMatte& gt);
double conn_error(const AlphaMatte& pred, const AlphaMatte& gt);

MetricReport evaluate(const AlphaMatte& pred, const AlphaMatte& gt,
                      const rosta::RostaMask& regions);

}  // namespace matkit::metrics
