#include "namedcurves/tone_curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "namedcurves/error.hpp"

namespace namedcurves {

namespace {

constexpr std::string_view kChannelNames[kNumChannels] = {"r", "g", "b"};

struct PascalTriangle {
  std::array<std::array<std::uint64_t, kMaxControlPoints>, kMaxControlPoints> rows{};

  PascalTriangle() {
    for (int n = 0; n < kMaxControlPoints; ++n) {
      rows[n][0] = 1;
      for (int k = 1; k <= n; ++k) rows[n][k] = rows[n - 1][k - 1] + (k < n ? rows[n - 1][k] : 0);
    }
  }
};

const PascalTriangle& pascal() {
  static const PascalTriangle table;
  return table;
}

void check_size(int m) {
  if (m < 2 || m > kMaxControlPoints) {
    throw Error(ErrorKind::kInvalidArgument, "control point count " + std::to_string(m) +
                                                 " outside [2, " +
                                                 std::to_string(kMaxControlPoints) + "]");
  }
}

}  // namespace

std::string_view name_of(Channel c) { return kChannelNames[static_cast<int>(c)]; }

ControlPoints ControlPoints::identity(int m) {
  check_size(m);
  ControlPoints cp;
  cp.points.resize(m);
  for (int i = 0; i < m; ++i) cp.points[i] = static_cast<double>(i) / (m - 1);
  cp.points.back() = 1.0;
  return cp;
}

void validate_control_points(const ControlPoints& cp) {
  check_size(cp.size());
  const auto& p = cp.points;
  if (p.front() != 0.0) throw Error(ErrorKind::kInvalidArgument, "first control point must be 0");
  if (!(std::abs(p.back() - 1.0) <= 1e-12)) {
    throw Error(ErrorKind::kInvalidArgument, "last control point must be 1");
  }
  for (int i = 0; i < cp.size(); ++i) {
    if (!(p[i] >= 0.0 && p[i] <= 1.0)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "control point " + std::to_string(i) + " outside [0, 1]");
    }
    if (i > 0 && p[i] < p[i - 1]) {
      throw Error(ErrorKind::kInvalidArgument,
                  "control points decrease at index " + std::to_string(i));
    }
  }
}

ControlPoints normalize_increments(std::span<const double> deltas) {
  check_size(static_cast<int>(deltas.size()) + 1);
  double total = 0.0;
  for (double d : deltas) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw Error(ErrorKind::kInvalidArgument, "increments must be finite and nonnegative");
    }
    total += d;
  }
  if (total <= 1e-12) {
    throw Error(ErrorKind::kDegenerateIncrements, "increments sum to " + std::to_string(total));
  }
  ControlPoints cp;
  cp.points.resize(deltas.size() + 1);
  cp.points[0] = 0.0;
  double running = 0.0;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    running += deltas[k];
    cp.points[k + 1] = std::min(1.0, running / total);
  }
  cp.points.back() = 1.0;
  return cp;
}

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n >= kMaxControlPoints || k < 0 || k > n) return 0;
  return pascal().rows[n][k];
}

void bernstein_basis(int m, double t, std::span<double> out) {
  const int n = m - 1;
  const double s = 1.0 - t;
  // out[k] temporarily holds t^k; the (1-t) powers are folded in from the top.
  double tp = 1.0;
  for (int k = 0; k <= n; ++k) {
    out[k] = tp;
    tp *= t;
  }
  double sp = 1.0;
  const auto& row = pascal().rows[n];
  for (int k = n; k >= 0; --k) {
    out[k] *= sp * static_cast<double>(row[k]);
    sp *= s;
  }
}

double bezier_eval(const ControlPoints& cp, double t) {
  const int m = cp.size();
  check_size(m);
  t = clamp01(t);
  std::array<double, kMaxControlPoints> basis;
  bernstein_basis(m, t, basis);
  double sum = 0.0;
  for (int k = 0; k < m; ++k) sum += cp.points[k] * basis[k];
  return sum;
}

double de_casteljau_eval(const ControlPoints& cp, double t) {
  const int m = cp.size();
  check_size(m);
  t = clamp01(t);
  std::array<double, kMaxControlPoints> work;
  std::copy(cp.points.begin(), cp.points.end(), work.begin());
  for (int level = m - 1; level > 0; --level) {
    for (int k = 0; k < level; ++k) work[k] = (1.0 - t) * work[k] + t * work[k + 1];
  }
  return work[0];
}

TonemapLut::TonemapLut(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2) throw Error(ErrorKind::kBadResolution, "LUT needs at least 2 samples");
}

double TonemapLut::operator()(double t) const {
  t = clamp01(t);
  const double pos = t * static_cast<double>(samples_.size() - 1);
  const std::size_t lo = std::min(static_cast<std::size_t>(pos), samples_.size() - 2);
  const double frac = pos - static_cast<double>(lo);
  return samples_[lo] + frac * (samples_[lo + 1] - samples_[lo]);
}

TonemapLut bake_lut(const ControlPoints& cp, int resolution) {
  if (resolution < 2) {
    throw Error(ErrorKind::kBadResolution,
                "LUT resolution must be at least 2, got " + std::to_string(resolution));
  }
  std::vector<double> samples(resolution);
  for (int r = 0; r < resolution; ++r) {
    samples[r] = bezier_eval(cp, static_cast<double>(r) / (resolution - 1));
  }
  return TonemapLut(std::move(samples));
}

CurveSet::CurveSet(int m) : m_(m) {
  const ControlPoints id = ControlPoints::identity(m);
  for (auto& group : curves_) group.fill(id);
}

void CurveSet::set_curve(ColorGroup g, Channel c, ControlPoints cp) {
  if (cp.size() != m_) {
    throw Error(ErrorKind::kInvalidArgument, "curve has " + std::to_string(cp.size()) +
                                                 " control points, set uses " + std::to_string(m_));
  }
  validate_control_points(cp);
  curves_[static_cast<int>(g)][static_cast<int>(c)] = std::move(cp);
}

GroupImages apply_curveset(const CurveSet& curves, const ImageBuffer& img, ApplyMode mode,
                           int lut_resolution) {
  GroupImages out;
  const std::size_t n = img.pixel_count();
  const auto src = img.data();
  for (int g = 0; g < kNumColorGroups; ++g) {
    out[g] = ImageBuffer(img.width(), img.height());
    auto dst = out[g].data();
    for (int c = 0; c < kNumChannels; ++c) {
      const ControlPoints& cp = curves.curve(static_cast<ColorGroup>(g), static_cast<Channel>(c));
      if (mode == ApplyMode::kLut) {
        const TonemapLut lut = bake_lut(cp, lut_resolution);
        for (std::size_t p = 0; p < n; ++p) dst[3 * p + c] = lut(src[3 * p + c]);
      } else {
        for (std::size_t p = 0; p < n; ++p) dst[3 * p + c] = bezier_eval(cp, src[3 * p + c]);
      }
    }
  }
  return out;
}

}  // namespace namedcurves
