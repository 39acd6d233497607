#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "namedcurves/image.hpp"

namespace namedcurves {

// Canonical (lexicographic) order used by every vector layout and file format.
enum class ColorName : int {
  kBlack, kBlue, kBrown, kGreen, kGrey, kOrange, kPink, kPurple, kRed, kWhite, kYellow,
};
inline constexpr int kNumColorNames = 11;

enum class ColorGroup : int { kRed, kGreen, kBlue, kOby, kPinkPurple, kAchromatic };
inline constexpr int kNumColorGroups = 6;

using NameProbabilities = std::array<double, kNumColorNames>;
using GroupProbabilities = std::array<double, kNumColorGroups>;

std::string_view name_of(ColorName n);
std::string_view name_of(ColorGroup g);
ColorGroup group_of(ColorName n);

/// Constants of the built-in hue/saturation/value color namer.
struct ParametricNamingConfig {
  // Achromatic mass falls from 1 to 0 as saturation crosses this band.
  double sat_lo = 0.15, sat_hi = 0.30;
  // Black and white shares within the achromatic mass.
  double black_lo = 0.20, black_hi = 0.35;
  double white_lo = 0.75, white_hi = 0.90;
  // Hue cores in degrees, circular order red, orange, yellow, green, blue,
  // purple, pink. Memberships ramp linearly across the gaps between cores.
  std::array<std::array<double, 2>, 7> hue_cores = {{
      {345.0, 15.0}, {25.0, 45.0}, {55.0, 70.0}, {85.0, 160.0},
      {200.0, 260.0}, {270.0, 300.0}, {315.0, 340.0},
  }};
  // Share of orange+yellow re-labelled brown: 1 - sstep(v; lo, hi).
  double brown_lo = 0.45, brown_hi = 0.65;
};

/// Per-pixel color-name classifier. Either a tabulated cube of probability
/// vectors (nearest-bin lookup on 8-bit codes) or the parametric fallback.
class ColorNamingModel {
 public:
  enum class Backend { kLut, kParametric };

  static ColorNamingModel parametric(ParametricNamingConfig cfg = {});
  /// Takes ownership of an N^3 x 11 table in canonical name order. Bins are
  /// validated (sum within 1e-4 of 1) and then renormalized to sum to 1.
  static ColorNamingModel from_table(int side, std::vector<float> table);

  Backend backend() const { return backend_; }
  int lut_side() const { return side_; }
  const ParametricNamingConfig& config() const { return cfg_; }

  NameProbabilities classify(const Rgb& rgb) const;

 private:
  ColorNamingModel() = default;

  Backend backend_ = Backend::kParametric;
  ParametricNamingConfig cfg_;
  int side_ = 0;
  std::vector<double> table_;
};

/// Reads a CNLUT v1 file: ASCII header "CNLUT 1 <N> 11\n" followed by
/// N^3 * 11 little-endian float32, bin index ((ir*N)+ig)*N+ib.
ColorNamingModel load_cnlut(const std::filesystem::path& path);

/// Tabulates a model at bin centers and writes it as CNLUT v1.
void save_cnlut(const ColorNamingModel& model, int side, const std::filesystem::path& path);

NameProbabilities classify_pixel(const ColorNamingModel& model, const Rgb& rgb);

GroupProbabilities group_probabilities(const NameProbabilities& p11);

/// K planes of per-pixel probabilities, stored plane-major.
class ProbabilityMapSet {
 public:
  ProbabilityMapSet() = default;
  ProbabilityMapSet(int width, int height, int planes);

  int width() const { return width_; }
  int height() const { return height_; }
  int planes() const { return planes_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  std::span<double> plane(int k);
  std::span<const double> plane(int k) const;
  double& at(int k, std::size_t p) { return data_[k * pixel_count() + p]; }
  double at(int k, std::size_t p) const { return data_[k * pixel_count() + p]; }

 private:
  int width_ = 0;
  int height_ = 0;
  int planes_ = 0;
  std::vector<double> data_;
};

/// Classifies every pixel; grouped=true yields the 6 group planes.
ProbabilityMapSet compute_maps(const ColorNamingModel& model, const ImageBuffer& img, bool grouped);

/// Color-coded view of one plane: (1 - p) * white + p * original pixel.
ImageBuffer render_map_visualization(const ImageBuffer& img, const ProbabilityMapSet& maps, int plane);

/// Greyscale view of one plane (probability replicated to all channels).
ImageBuffer render_probability_plane(const ProbabilityMapSet& maps, int plane);

}  // namespace namedcurves
