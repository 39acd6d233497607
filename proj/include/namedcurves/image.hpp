#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace namedcurves {

using Rgb = std::array<double, 3>;

/// Interleaved RGB image, row-major, nominal range [0,1].
///
/// Samples are stored in double precision; the range is not enforced on
/// construction, only by operations documented as clamping.
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int width, int height, double fill = 0.0);
  ImageBuffer(int width, int height, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  bool empty() const { return data_.empty(); }

  double& at(int x, int y, int c) { return data_[index(x, y, c)]; }
  double at(int x, int y, int c) const { return data_[index(x, y, c)]; }

  Rgb pixel(std::size_t p) const { return {data_[3 * p], data_[3 * p + 1], data_[3 * p + 2]}; }
  void set_pixel(std::size_t p, const Rgb& rgb);

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_shape(const ImageBuffer& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  /// Clamps every sample into [0,1] in place.
  void clamp();

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * 3 + c;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

/// Throws DimensionMismatch unless both images share width and height.
void require_same_shape(const ImageBuffer& a, const ImageBuffer& b, const char* context);

/// Reads an 8- or 16-bit RGB/RGBA (or greyscale) PNG. Alpha is dropped.
ImageBuffer load_png(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG. Samples are clamped to [0,1] and quantized with
/// round-half-away-from-zero. The file is written to a temporary sibling and
/// renamed into place, so a failed write leaves no partial output.
void save_png(const ImageBuffer& img, const std::filesystem::path& path);

/// Quantizes one sample the same way save_png does.
unsigned char quantize8(double v);

/// Box-filter reduction by the smallest integer factor that brings the longest
/// side to at most max_side. Returns a copy when no reduction is needed.
ImageBuffer downsample_to(const ImageBuffer& img, int max_side);

}  // namespace namedcurves
