#pragma once

#include "namedcurves/image.hpp"

namespace namedcurves {

struct LabPixel {
  double L = 0.0;
  double a = 0.0;
  double b = 0.0;
};

struct LchPixel {
  double L = 0.0;
  double C = 0.0;
  double h = 0.0;  // degrees in [0, 360)
};

// D65 reference white.
inline constexpr double kWhiteX = 0.95047;
inline constexpr double kWhiteY = 1.0;
inline constexpr double kWhiteZ = 1.08883;

/// IEC 61966-2-1 decoding of a single sRGB-encoded component.
double srgb_to_linear(double v);

/// sRGB (clamped to [0,1]) -> linear -> XYZ -> CIE Lab, all relative to D65.
LabPixel srgb_to_lab(const Rgb& rgb);

/// Cylindrical form of Lab. The hue is reported as 0 when chroma is exactly 0.
LchPixel lab_to_lch(const LabPixel& p);

struct Hsv {
  double h = 0.0;  // degrees in [0, 360)
  double s = 0.0;
  double v = 0.0;
};

Hsv rgb_to_hsv(const Rgb& rgb);

}  // namespace namedcurves
