#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "namedcurves/color_naming.hpp"
#include "namedcurves/fusion.hpp"
#include "namedcurves/image.hpp"
#include "namedcurves/metrics.hpp"
#include "namedcurves/tone_curve.hpp"

namespace namedcurves {

/// Unconstrained parameters of a CurveSet. Increment k of curve (g, c) is
/// softplus(theta[(g * 3 + c) * (M - 1) + k]); theta = 0 is the identity.
struct FitParams {
  int m = kDefaultControlPoints;
  std::vector<double> theta;

  explicit FitParams(int m = kDefaultControlPoints);

  std::size_t size() const { return theta.size(); }
  std::size_t offset(ColorGroup g, Channel c) const {
    return (static_cast<std::size_t>(g) * kNumChannels + static_cast<std::size_t>(c)) * (m - 1);
  }

  CurveSet to_curves() const;

  /// Parameters reproducing cs exactly up to rounding. Flat segments
  /// (zero increments) are approximated by a large negative theta.
  static FitParams from_curves(const CurveSet& cs);
};

double softplus(double x);

/// MSE between blend(apply_curveset(curves(params), input), weights) and target.
double objective(const FitParams& params, const ImageBuffer& input, const ImageBuffer& target,
                 const FusionWeights& weights);

/// Analytic gradient of objective with respect to theta.
std::vector<double> gradient(const FitParams& params, const ImageBuffer& input,
                             const ImageBuffer& target, const FusionWeights& weights);

/// The objective is quadratic in the control points, so one pass over the
/// pixels yields per-channel normal equations; afterwards each objective or
/// gradient evaluation is independent of the image size.
class QuadraticObjective {
 public:
  QuadraticObjective(const ImageBuffer& input, const ImageBuffer& target,
                     const FusionWeights& weights, int m);

  int control_points() const { return m_; }

  double value(const FitParams& params) const;
  /// Returns the value and writes the theta-gradient into grad.
  double value_and_gradient(const FitParams& params, std::span<double> grad) const;

 private:
  int m_;
  int dim_;  // kNumColorGroups * m
  // Per channel: Gram matrix (dim x dim, row-major), linear term, constant.
  std::array<std::vector<double>, kNumChannels> gram_;
  std::array<std::vector<double>, kNumChannels> linear_;
  std::array<double, kNumChannels> constant_{};
  double scale_;  // 1 / (3 * pixel count)
};

struct FitConfig {
  int iterations = 500;
  double step = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int control_points = kDefaultControlPoints;
  int max_side = 256;
  double tau = kDefaultFusionThreshold;
  // Standard deviation of a seeded Gaussian perturbation of the identity
  // start. Zero keeps the start exactly at the identity curves.
  double init_noise = 0.0;
  std::uint64_t seed = 0;
};

struct FitResult {
  CurveSet curves;
  std::vector<double> trace;  // objective at each evaluated iterate
  double initial_objective = 0.0;  // identity curves
  double best_objective = 0.0;
  int best_iteration = 0;  // index into trace, or -1 when identity won
  int fit_width = 0;
  int fit_height = 0;
  MetricsReport final_metrics;  // full resolution, fitted output vs target
};

/// Adam on theta against the (downsampled) pair with fusion weights fixed from
/// the input. Returns the best iterate; never worse than the identity curves.
FitResult fit(const ImageBuffer& input, const ImageBuffer& target, const ColorNamingModel& model,
              const FitConfig& cfg = {});

/// Grouped maps -> weights(tau) -> six adjusted images -> blend.
ImageBuffer apply_fitted(const CurveSet& curves, const ImageBuffer& input,
                         const ColorNamingModel& model, double tau = kDefaultFusionThreshold);

}  // namespace namedcurves
