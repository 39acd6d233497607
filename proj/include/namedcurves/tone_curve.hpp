#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "namedcurves/color_naming.hpp"
#include "namedcurves/image.hpp"

namespace namedcurves {

enum class Channel : int { kR, kG, kB };
inline constexpr int kNumChannels = 3;

std::string_view name_of(Channel c);

inline constexpr int kDefaultControlPoints = 11;
inline constexpr int kMaxControlPoints = 32;

/// Output-axis values P_0..P_{M-1} of a Bezier tone curve whose control points
/// sit at evenly spaced inputs m/(M-1).
struct ControlPoints {
  std::vector<double> points;

  int size() const { return static_cast<int>(points.size()); }

  /// P_m = m/(M-1).
  static ControlPoints identity(int m);

  friend bool operator==(const ControlPoints&, const ControlPoints&) = default;
};

/// Throws InvalidArgument if cp is not a normalized monotone curve:
/// P_0 == 0, |P_{M-1} - 1| <= 1e-12, nondecreasing, every value in [0,1].
void validate_control_points(const ControlPoints& cp);

/// Cumulative sum of the M-1 increments divided by their total; P_0 = 0 and
/// P_{M-1} = 1 exactly. Throws DegenerateIncrements when the total is <= 1e-12.
ControlPoints normalize_increments(std::span<const double> deltas);

/// C(n, k) for n < kMaxControlPoints, built once by Pascal's rule.
std::uint64_t binomial(int n, int k);

/// Fills out[m] = C(M-1, m) (1-t)^(M-1-m) t^m for m in [0, M).
void bernstein_basis(int m, double t, std::span<double> out);

/// Bernstein-form evaluation; t is clamped to [0,1].
double bezier_eval(const ControlPoints& cp, double t);

/// Repeated linear interpolation; same contract as bezier_eval.
double de_casteljau_eval(const ControlPoints& cp, double t);

/// Curve sampled on r/(R-1); evaluated with linear interpolation.
class TonemapLut {
 public:
  explicit TonemapLut(std::vector<double> samples);

  int resolution() const { return static_cast<int>(samples_.size()); }
  std::span<const double> samples() const { return samples_; }

  double operator()(double t) const;

 private:
  std::vector<double> samples_;
};

inline constexpr int kDefaultLutResolution = 4096;

/// Throws BadResolution when resolution < 2.
TonemapLut bake_lut(const ControlPoints& cp, int resolution);

/// One curve per (color group, RGB channel), all with the same M.
class CurveSet {
 public:
  explicit CurveSet(int m = kDefaultControlPoints);

  static CurveSet identity(int m = kDefaultControlPoints) { return CurveSet(m); }

  int control_points() const { return m_; }

  const ControlPoints& curve(ColorGroup g, Channel c) const {
    return curves_[static_cast<int>(g)][static_cast<int>(c)];
  }
  /// Validates cp and its size before storing it.
  void set_curve(ColorGroup g, Channel c, ControlPoints cp);

  friend bool operator==(const CurveSet&, const CurveSet&) = default;

 private:
  int m_;
  std::array<std::array<ControlPoints, kNumChannels>, kNumColorGroups> curves_;
};

enum class ApplyMode { kDirect, kLut };

using GroupImages = std::array<ImageBuffer, kNumColorGroups>;

/// Applies every group's three channel curves to img, giving six globally
/// adjusted images. Inputs are clamped to [0,1].
GroupImages apply_curveset(const CurveSet& curves, const ImageBuffer& img,
                           ApplyMode mode = ApplyMode::kDirect,
                           int lut_resolution = kDefaultLutResolution);

}  // namespace namedcurves
