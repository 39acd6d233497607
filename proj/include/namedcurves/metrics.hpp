#pragma once

#include <optional>

#include "namedcurves/color.hpp"
#include "namedcurves/image.hpp"

namespace namedcurves {

/// Mean squared difference over all pixels and channels.
double mse(const ImageBuffer& a, const ImageBuffer& b);
double rmse(const ImageBuffer& a, const ImageBuffer& b);

/// 10 log10(1 / MSE). Returns +infinity for identical images.
double psnr(const ImageBuffer& a, const ImageBuffer& b);

/// Gaussian-window SSIM (11x11, sigma 1.5, K1 0.01, K2 0.03, L 1) over the
/// valid window region, averaged across RGB. Needs both sides >= 11.
double ssim(const ImageBuffer& a, const ImageBuffer& b);

/// CIE76 distance between two Lab colors.
double delta_e_ab(const LabPixel& x, const LabPixel& y);

/// CIEDE2000 with kL = kC = kH = 1.
double delta_e_00(const LabPixel& x, const LabPixel& y);

/// Per-pixel CIE76 distance (D65 Lab), averaged.
double delta_e_ab(const ImageBuffer& a, const ImageBuffer& b);

/// Per-pixel CIEDE2000 distance (D65 Lab), averaged.
double delta_e_00(const ImageBuffer& a, const ImageBuffer& b);

struct LossConfig {
  double alpha = 0.5;
};

/// alpha * RMSE(y, x_std) + RMSE(y, y_hat) + (1 - SSIM(y, y_hat)).
double loss_eq3(const ImageBuffer& x_std, const ImageBuffer& y_hat, const ImageBuffer& y,
                const LossConfig& cfg = {});

struct MetricsReport {
  double psnr = 0.0;
  double ssim = 0.0;
  double de_ab = 0.0;
  double de_00 = 0.0;
  std::optional<double> loss;
};

/// All four image metrics for one pair; ssim is NaN when the image is smaller
/// than the SSIM window.
MetricsReport evaluate(const ImageBuffer& a, const ImageBuffer& b);

}  // namespace namedcurves
