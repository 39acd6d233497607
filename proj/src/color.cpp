#include "namedcurves/color.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace namedcurves {

double srgb_to_linear(double v) {
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

namespace {

double lab_f(double t) {
  constexpr double kDelta = 6.0 / 29.0;
  constexpr double kDelta3 = kDelta * kDelta * kDelta;
  return t > kDelta3 ? std::cbrt(t) : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

}  // namespace

LabPixel srgb_to_lab(const Rgb& rgb) {
  const double r = srgb_to_linear(clamp01(rgb[0]));
  const double g = srgb_to_linear(clamp01(rgb[1]));
  const double b = srgb_to_linear(clamp01(rgb[2]));

  const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;

  const double fx = lab_f(x / kWhiteX);
  const double fy = lab_f(y / kWhiteY);
  const double fz = lab_f(z / kWhiteZ);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

LchPixel lab_to_lch(const LabPixel& p) {
  const double c = std::hypot(p.a, p.b);
  double h = 0.0;
  if (c > 0.0) {
    h = std::atan2(p.b, p.a) * 180.0 / std::numbers::pi;
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
  }
  return {p.L, c, h};
}

Hsv rgb_to_hsv(const Rgb& rgb) {
  const double r = clamp01(rgb[0]);
  const double g = clamp01(rgb[1]);
  const double b = clamp01(rgb[2]);
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double d = mx - mn;

  Hsv out;
  out.v = mx;
  out.s = mx > 0.0 ? d / mx : 0.0;
  if (d > 0.0) {
    double h;
    if (mx == r) {
      h = 60.0 * ((g - b) / d);
    } else if (mx == g) {
      h = 60.0 * ((b - r) / d + 2.0);
    } else {
      h = 60.0 * ((r - g) / d + 4.0);
    }
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.h = h;
  }
  return out;
}

}  // namespace namedcurves
