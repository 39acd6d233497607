#include "namedcurves/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "namedcurves/error.hpp"

namespace namedcurves {

namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimC1 = 0.01 * 0.01;
constexpr double kSsimC2 = 0.03 * 0.03;

constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
constexpr double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

std::array<double, kSsimWindow> gaussian_window() {
  std::array<double, kSsimWindow> w{};
  double sum = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - kSsimWindow / 2;
    w[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Separable valid-region filter of one channel (or product of two channels).
std::vector<double> filter_valid(const std::vector<double>& plane, int width, int height,
                                 const std::array<double, kSsimWindow>& w) {
  const int ow = width - kSsimWindow + 1;
  const int oh = height - kSsimWindow + 1;
  std::vector<double> rows(static_cast<std::size_t>(ow) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) acc += w[k] * plane[static_cast<std::size_t>(y) * width + x + k];
      rows[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) acc += w[k] * rows[static_cast<std::size_t>(y + k) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace

double mse(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b, "mse");
  const auto da = a.data();
  const auto db = b.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = da[i] - db[i];
    acc += d * d;
  }
  return acc / static_cast<double>(da.size());
}

double rmse(const ImageBuffer& a, const ImageBuffer& b) { return std::sqrt(mse(a, b)); }

double psnr(const ImageBuffer& a, const ImageBuffer& b) {
  const double e = mse(a, b);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / e);
}

double ssim(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b, "ssim");
  const int w = a.width();
  const int h = a.height();
  if (w < kSsimWindow || h < kSsimWindow) {
    throw Error(ErrorKind::kImageTooSmall, "SSIM needs both sides >= 11");
  }
  const auto window = gaussian_window();
  const std::size_t n = a.pixel_count();
  double total = 0.0;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> pa(n), pb(n), aa(n), bb(n), ab(n);
    for (std::size_t p = 0; p < n; ++p) {
      pa[p] = a.data()[3 * p + c];
      pb[p] = b.data()[3 * p + c];
      aa[p] = pa[p] * pa[p];
      bb[p] = pb[p] * pb[p];
      ab[p] = pa[p] * pb[p];
    }
    const auto mu_a = filter_valid(pa, w, h, window);
    const auto mu_b = filter_valid(pb, w, h, window);
    const auto e_aa = filter_valid(aa, w, h, window);
    const auto e_bb = filter_valid(bb, w, h, window);
    const auto e_ab = filter_valid(ab, w, h, window);
    double acc = 0.0;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
      const double ma = mu_a[i];
      const double mb = mu_b[i];
      const double va = e_aa[i] - ma * ma;
      const double vb = e_bb[i] - mb * mb;
      const double cov = e_ab[i] - ma * mb;
      acc += ((2.0 * ma * mb + kSsimC1) * (2.0 * cov + kSsimC2)) /
             ((ma * ma + mb * mb + kSsimC1) * (va + vb + kSsimC2));
    }
    total += acc / static_cast<double>(mu_a.size());
  }
  return total / 3.0;
}

double delta_e_ab(const LabPixel& x, const LabPixel& y) {
  const double dl = x.L - y.L;
  const double da = x.a - y.a;
  const double db = x.b - y.b;
  return std::sqrt(dl * dl + da * da + db * db);
}

double delta_e_00(const LabPixel& x, const LabPixel& y) {
  constexpr double k25_7 = 6103515625.0;  // 25^7
  const double c1 = std::hypot(x.a, x.b);
  const double c2 = std::hypot(y.a, y.b);
  const double c_bar7 = std::pow(0.5 * (c1 + c2), 7.0);
  const double g = 0.5 * (1.0 - std::sqrt(c_bar7 / (c_bar7 + k25_7)));

  const double a1 = (1.0 + g) * x.a;
  const double a2 = (1.0 + g) * y.a;
  const LchPixel p1 = lab_to_lch({x.L, a1, x.b});
  const LchPixel p2 = lab_to_lch({y.L, a2, y.b});

  const double dl = p2.L - p1.L;
  const double dc = p2.C - p1.C;
  const double cc = p1.C * p2.C;
  double dh = 0.0;
  if (cc != 0.0) {
    dh = p2.h - p1.h;
    if (dh > 180.0) {
      dh -= 360.0;
    } else if (dh < -180.0) {
      dh += 360.0;
    }
  }
  const double d_big_h = 2.0 * std::sqrt(cc) * std::sin(deg2rad(dh / 2.0));

  const double l_bar = 0.5 * (p1.L + p2.L);
  const double c_bar = 0.5 * (p1.C + p2.C);
  double h_bar = p1.h + p2.h;
  if (cc != 0.0) {
    if (std::abs(p1.h - p2.h) <= 180.0) {
      h_bar *= 0.5;
    } else if (h_bar < 360.0) {
      h_bar = 0.5 * (h_bar + 360.0);
    } else {
      h_bar = 0.5 * (h_bar - 360.0);
    }
  }

  const double t = 1.0 - 0.17 * std::cos(deg2rad(h_bar - 30.0)) +
                   0.24 * std::cos(deg2rad(2.0 * h_bar)) +
                   0.32 * std::cos(deg2rad(3.0 * h_bar + 6.0)) -
                   0.20 * std::cos(deg2rad(4.0 * h_bar - 63.0));
  const double d_theta = 30.0 * std::exp(-std::pow((h_bar - 275.0) / 25.0, 2.0));
  const double c_bar_7 = std::pow(c_bar, 7.0);
  const double rc = 2.0 * std::sqrt(c_bar_7 / (c_bar_7 + k25_7));
  const double l50 = (l_bar - 50.0) * (l_bar - 50.0);
  const double sl = 1.0 + 0.015 * l50 / std::sqrt(20.0 + l50);
  const double sc = 1.0 + 0.045 * c_bar;
  const double sh = 1.0 + 0.015 * c_bar * t;
  const double rt = -std::sin(deg2rad(2.0 * d_theta)) * rc;

  const double tl = dl / sl;
  const double tc = dc / sc;
  const double th = d_big_h / sh;
  return std::sqrt(std::max(0.0, tl * tl + tc * tc + th * th + rt * tc * th));
}

double delta_e_ab(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b, "delta_e_ab");
  double acc = 0.0;
  for (std::size_t p = 0; p < a.pixel_count(); ++p) {
    acc += delta_e_ab(srgb_to_lab(a.pixel(p)), srgb_to_lab(b.pixel(p)));
  }
  return acc / static_cast<double>(a.pixel_count());
}

double delta_e_00(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b, "delta_e_00");
  double acc = 0.0;
  for (std::size_t p = 0; p < a.pixel_count(); ++p) {
    acc += delta_e_00(srgb_to_lab(a.pixel(p)), srgb_to_lab(b.pixel(p)));
  }
  return acc / static_cast<double>(a.pixel_count());
}

double loss_eq3(const ImageBuffer& x_std, const ImageBuffer& y_hat, const ImageBuffer& y,
                const LossConfig& cfg) {
  if (!(cfg.alpha >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "alpha must be >= 0");
  require_same_shape(y, x_std, "loss");
  require_same_shape(y, y_hat, "loss");
  return cfg.alpha * rmse(y, x_std) + rmse(y, y_hat) + (1.0 - ssim(y, y_hat));
}

MetricsReport evaluate(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b, "evaluate");
  MetricsReport r;
  r.psnr = psnr(a, b);
  r.ssim = (a.width() >= kSsimWindow && a.height() >= kSsimWindow)
               ? ssim(a, b)
               : std::numeric_limits<double>::quiet_NaN();
  r.de_ab = delta_e_ab(a, b);
  r.de_00 = delta_e_00(a, b);
  return r;
}

}  // namespace namedcurves
