#pragma once

#include <string>

#include "tenrec/tensor.hpp"

namespace tenrec {

struct QualityReport {
  double psnr = 0.0;
  double ssim = 0.0;
};

/// 10 * log10(peak^2 / MSE) over all entries; +infinity when MSE = 0.
double psnr(const Tensor3& reference, const Tensor3& estimate,
            double peak = 255.0);

/// Single-scale SSIM: 8x8 box window sliding by 1 over every frontal slice,
/// C1 = (0.01*255)^2, C2 = (0.03*255)^2, population window statistics,
/// mean over all windows and slices. Requires spatial dims >= 8.
double ssim(const Tensor3& reference, const Tensor3& estimate);

/// Numeric text for metric fields; infinity serializes as "inf" so the
/// MSE = 0 sentinel survives JSON and CSV.
std::string format_metric(double value);

}  // namespace tenrec
