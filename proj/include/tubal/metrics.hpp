#pragma once

#include <limits>

#include "tubal/tensor.hpp"

namespace tubal {

/// PSNR of a perfect reconstruction (MSE = 0) — IEEE +infinity, used as a
/// distinguished sentinel rather than any large finite stand-in.
inline constexpr double kInfinitePsnr =
    std::numeric_limits<double>::infinity();

struct MetricReport {
  double psnr = 0.0;  // dB; kInfinitePsnr when y == y_true
  double ssim = 0.0;  // mean over frontal slices, in [-1, 1]
  double rse = 0.0;   // ||y - y_true||_F^2 / ||y_true||_F^2
};

/// 10*log10(peak^2 / MSE) with peak = max entry of y_true and
/// MSE = ||y-y_true||_F^2 / (n1*n2*n3). Returns kInfinitePsnr when MSE = 0.
/// Throws ZeroReference when the peak is zero (covers all-zero references).
double psnr(const Tensor3& y, const Tensor3& y_true);

/// Single-scale SSIM per frontal slice, averaged over slices. Gaussian
/// window 11x11 (shrunk to fit small slices), sigma 1.5, K1 = 0.01,
/// K2 = 0.03, dynamic range = max entry of y_true. Valid-mode windows (no
/// padding). ssim(y, y) == 1 exactly.
double ssim(const Tensor3& y, const Tensor3& y_true);

/// Relative squared error. Throws ZeroReference when y_true is all zero.
double rse(const Tensor3& y, const Tensor3& y_true);

MetricReport compute_metrics(const Tensor3& y, const Tensor3& y_true);

}  // namespace tubal
