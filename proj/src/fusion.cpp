#include "namedcurves/fusion.hpp"

#include <string>

#include "namedcurves/error.hpp"

namespace namedcurves {

FusionWeights::FusionWeights(int width, int height, double tau)
    : width_(width), height_(height), tau_(tau) {
  data_.assign(pixel_count() * kNumColorGroups, 0.0);
  fallback_.assign(pixel_count(), 0);
}

std::span<const double> FusionWeights::plane(int group) const {
  return std::span<const double>(data_).subspan(group * pixel_count(), pixel_count());
}

FusionWeights make_weights(const ProbabilityMapSet& maps, double tau) {
  if (maps.planes() != kNumColorGroups) {
    throw Error(ErrorKind::kInvalidArgument, "fusion needs the 6 grouped probability planes");
  }
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "threshold must lie in [0, 1]");
  }
  FusionWeights w(maps.width(), maps.height(), tau);
  const std::size_t n = maps.pixel_count();
  for (std::size_t p = 0; p < n; ++p) {
    double kept = 0.0;
    double total = 0.0;
    for (int g = 0; g < kNumColorGroups; ++g) {
      const double v = maps.at(g, p);
      total += v;
      if (v >= tau) kept += v;
    }
    if (kept > 0.0) {
      for (int g = 0; g < kNumColorGroups; ++g) {
        const double v = maps.at(g, p);
        w.at(g, p) = v >= tau ? v / kept : 0.0;
      }
    } else {
      w.mark_fallback(p);
      for (int g = 0; g < kNumColorGroups; ++g) {
        w.at(g, p) = total > 0.0 ? maps.at(g, p) / total : 1.0 / kNumColorGroups;
      }
    }
  }
  return w;
}

ImageBuffer blend(const GroupImages& adjusted, const FusionWeights& weights) {
  for (const ImageBuffer& img : adjusted) {
    if (img.width() != weights.width() || img.height() != weights.height()) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "adjusted image " + std::to_string(img.width()) + "x" +
                      std::to_string(img.height()) + " vs weights " +
                      std::to_string(weights.width()) + "x" + std::to_string(weights.height()));
    }
  }
  ImageBuffer out(weights.width(), weights.height());
  auto dst = out.data();
  const std::size_t n = weights.pixel_count();
  for (std::size_t p = 0; p < n; ++p) {
    for (int c = 0; c < 3; ++c) {
      double acc = 0.0;
      for (int g = 0; g < kNumColorGroups; ++g) acc += weights.at(g, p) * adjusted[g].data()[3 * p + c];
      dst[3 * p + c] = clamp01(acc);
    }
  }
  return out;
}

std::array<std::size_t, kNumColorGroups + 1> active_branch_stats(const FusionWeights& weights) {
  std::array<std::size_t, kNumColorGroups + 1> hist{};
  for (std::size_t p = 0; p < weights.pixel_count(); ++p) {
    int active = 0;
    for (int g = 0; g < kNumColorGroups; ++g) active += weights.at(g, p) != 0.0 ? 1 : 0;
    ++hist[active];
  }
  return hist;
}

}  // namespace namedcurves
