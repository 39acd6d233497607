#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "namedcurves/color_naming.hpp"
#include "namedcurves/tone_curve.hpp"

namespace namedcurves {

inline constexpr double kDefaultFusionThreshold = 0.2;

/// Per-pixel blending weights over the six color groups, plane-major.
class FusionWeights {
 public:
  FusionWeights() = default;
  FusionWeights(int width, int height, double tau);

  int width() const { return width_; }
  int height() const { return height_; }
  double tau() const { return tau_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  double& at(int group, std::size_t p) { return data_[group * pixel_count() + p]; }
  double at(int group, std::size_t p) const { return data_[group * pixel_count() + p]; }
  std::span<const double> plane(int group) const;

  /// True where every group fell below tau and the unthresholded vector was kept.
  bool is_fallback(std::size_t p) const { return fallback_[p] != 0; }
  void mark_fallback(std::size_t p) { fallback_[p] = 1; }

 private:
  int width_ = 0;
  int height_ = 0;
  double tau_ = kDefaultFusionThreshold;
  std::vector<double> data_;
  std::vector<std::uint8_t> fallback_;
};

/// Zeroes probabilities below tau and renormalizes the survivors per pixel.
/// A pixel with no survivor keeps its renormalized original vector.
FusionWeights make_weights(const ProbabilityMapSet& maps, double tau = kDefaultFusionThreshold);

/// Weighted average of the six adjusted images, clamped to [0,1].
ImageBuffer blend(const GroupImages& adjusted, const FusionWeights& weights);

/// histogram[k] = number of pixels with exactly k nonzero weights (k = 1..6;
/// index 0 is always 0).
std::array<std::size_t, kNumColorGroups + 1> active_branch_stats(const FusionWeights& weights);

}  // namespace namedcurves
