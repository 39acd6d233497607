#include "namedcurves/color_naming.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "namedcurves/color.hpp"
#include "namedcurves/curve_file.hpp"
#include "namedcurves/error.hpp"

namespace namedcurves {

static_assert(std::endian::native == std::endian::little, "CNLUT I/O assumes a little-endian host");

namespace {

constexpr std::string_view kNameStrings[kNumColorNames] = {
    "black", "blue", "brown", "green", "grey", "orange", "pink", "purple", "red", "white", "yellow",
};
constexpr std::string_view kGroupStrings[kNumColorGroups] = {
    "red", "green", "blue", "oby", "pinkpurple", "achromatic",
};
constexpr ColorGroup kGroupOfName[kNumColorNames] = {
    ColorGroup::kAchromatic, ColorGroup::kBlue,       ColorGroup::kOby,
    ColorGroup::kGreen,      ColorGroup::kAchromatic, ColorGroup::kOby,
    ColorGroup::kPinkPurple, ColorGroup::kPinkPurple, ColorGroup::kRed,
    ColorGroup::kAchromatic, ColorGroup::kOby,
};
// Circular hue order of ParametricNamingConfig::hue_cores.
constexpr ColorName kHueNames[7] = {
    ColorName::kRed,  ColorName::kOrange, ColorName::kYellow, ColorName::kGreen,
    ColorName::kBlue, ColorName::kPurple, ColorName::kPink,
};

double sstep(double x, double lo, double hi) {
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  const double t = (x - lo) / (hi - lo);
  return t * t * (3.0 - 2.0 * t);
}

// Forward angular distance from a to b in [0, 360).
double arc(double a, double b) {
  double d = std::fmod(b - a, 360.0);
  if (d < 0.0) d += 360.0;
  return d;
}

NameProbabilities classify_parametric(const ParametricNamingConfig& cfg, const Rgb& rgb) {
  const Hsv hsv = rgb_to_hsv(rgb);
  NameProbabilities p{};

  const double achromatic = 1.0 - sstep(hsv.s, cfg.sat_lo, cfg.sat_hi);
  const double black = 1.0 - sstep(hsv.v, cfg.black_lo, cfg.black_hi);
  const double white = sstep(hsv.v, cfg.white_lo, cfg.white_hi);
  p[static_cast<int>(ColorName::kBlack)] = achromatic * black;
  p[static_cast<int>(ColorName::kWhite)] = achromatic * white;
  p[static_cast<int>(ColorName::kGrey)] = achromatic * std::max(0.0, 1.0 - black - white);

  const double chromatic = 1.0 - achromatic;
  if (chromatic <= 0.0) return p;

  std::array<double, 7> hue{};
  const auto& cores = cfg.hue_cores;
  for (int i = 0; i < 7; ++i) {
    const double start = cores[i][0];
    const double end = cores[i][1];
    if (arc(start, hsv.h) <= arc(start, end)) {
      hue[i] = 1.0;
      break;
    }
    const double next_start = cores[(i + 1) % 7][0];
    const double gap = arc(end, next_start);
    const double into = arc(end, hsv.h);
    if (into < gap) {
      const double t = into / gap;
      hue[i] = 1.0 - t;
      hue[(i + 1) % 7] = t;
      break;
    }
  }

  const double g = 1.0 - sstep(hsv.v, cfg.brown_lo, cfg.brown_hi);
  const double orange = hue[1];
  const double yellow = hue[2];
  hue[1] = orange * (1.0 - g);
  hue[2] = yellow * (1.0 - g);
  p[static_cast<int>(ColorName::kBrown)] = chromatic * (orange + yellow) * g;
  for (int i = 0; i < 7; ++i) p[static_cast<int>(kHueNames[i])] += chromatic * hue[i];
  return p;
}

int lut_bin(double v, int side) {
  const long code = std::lround(clamp01(v) * 255.0);
  return static_cast<int>(code * side / 256);
}

}  // namespace

std::string_view name_of(ColorName n) { return kNameStrings[static_cast<int>(n)]; }
std::string_view name_of(ColorGroup g) { return kGroupStrings[static_cast<int>(g)]; }
ColorGroup group_of(ColorName n) { return kGroupOfName[static_cast<int>(n)]; }

ColorNamingModel ColorNamingModel::parametric(ParametricNamingConfig cfg) {
  ColorNamingModel m;
  m.backend_ = Backend::kParametric;
  m.cfg_ = cfg;
  return m;
}

ColorNamingModel ColorNamingModel::from_table(int side, std::vector<float> table) {
  if (side < 1 || side > 256) {
    throw Error(ErrorKind::kDimensionMismatch, "CNLUT side must be in [1, 256]");
  }
  const std::size_t bins = static_cast<std::size_t>(side) * side * side;
  if (table.size() != bins * kNumColorNames) {
    throw Error(ErrorKind::kDimensionMismatch, "CNLUT payload holds " +
                                                   std::to_string(table.size()) +
                                                   " floats, expected " +
                                                   std::to_string(bins * kNumColorNames));
  }
  ColorNamingModel m;
  m.backend_ = Backend::kLut;
  m.side_ = side;
  m.table_.resize(table.size());
  for (std::size_t b = 0; b < bins; ++b) {
    double sum = 0.0;
    bool finite_nonneg = true;
    for (int k = 0; k < kNumColorNames; ++k) {
      const double v = table[b * kNumColorNames + k];
      if (!std::isfinite(v) || v < 0.0) finite_nonneg = false;
      sum += v;
    }
    if (!finite_nonneg || std::abs(sum - 1.0) > 1e-4) {
      throw Error(ErrorKind::kNonNormalizedBin,
                  "CNLUT bin " + std::to_string(b) + " sums to " + std::to_string(sum));
    }
    for (int k = 0; k < kNumColorNames; ++k) {
      m.table_[b * kNumColorNames + k] = table[b * kNumColorNames + k] / sum;
    }
  }
  return m;
}

NameProbabilities ColorNamingModel::classify(const Rgb& rgb) const {
  if (backend_ == Backend::kParametric) return classify_parametric(cfg_, rgb);
  const int ir = lut_bin(rgb[0], side_);
  const int ig = lut_bin(rgb[1], side_);
  const int ib = lut_bin(rgb[2], side_);
  const std::size_t b = (static_cast<std::size_t>(ir) * side_ + ig) * side_ + ib;
  NameProbabilities p;
  std::copy_n(table_.begin() + b * kNumColorNames, kNumColorNames, p.begin());
  return p;
}

ColorNamingModel load_cnlut(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kFileNotFound, "cannot open CNLUT file: " + path.string());

  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic;
  int version = 0, side = 0, names = 0;
  if (!(hs >> magic) || magic != "CNLUT" || !(hs >> version) || version != 1) {
    throw Error(ErrorKind::kBadMagic, "not a CNLUT v1 file: " + path.string());
  }
  if (!(hs >> side >> names) || names != kNumColorNames) {
    throw Error(ErrorKind::kDimensionMismatch, "bad CNLUT header: " + header);
  }
  if (side < 1 || side > 256) {
    throw Error(ErrorKind::kDimensionMismatch, "CNLUT side out of range: " + std::to_string(side));
  }

  const std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::size_t expected =
      static_cast<std::size_t>(side) * side * side * kNumColorNames * sizeof(float);
  if (payload.size() != expected) {
    throw Error(ErrorKind::kDimensionMismatch, "CNLUT payload is " +
                                                   std::to_string(payload.size()) +
                                                   " bytes, expected " + std::to_string(expected));
  }
  std::vector<float> table(expected / sizeof(float));
  std::memcpy(table.data(), payload.data(), expected);
  return ColorNamingModel::from_table(side, std::move(table));
}

void save_cnlut(const ColorNamingModel& model, int side, const std::filesystem::path& path) {
  if (side < 1 || side > 256) {
    throw Error(ErrorKind::kInvalidArgument, "CNLUT side must be in [1, 256]");
  }
  // Representative value of a bin: middle of the 8-bit codes that land in it.
  std::vector<double> centers(side);
  for (int i = 0; i < side; ++i) {
    const int lo = (i * 256 + side - 1) / side;
    const int hi = ((i + 1) * 256 + side - 1) / side - 1;
    centers[i] = 0.5 * (lo + hi) / 255.0;
  }
  std::string out = "CNLUT 1 " + std::to_string(side) + " 11\n";
  const std::size_t header_size = out.size();
  out.resize(header_size + static_cast<std::size_t>(side) * side * side * kNumColorNames *
                               sizeof(float));
  char* dst = out.data() + header_size;
  for (int ir = 0; ir < side; ++ir) {
    for (int ig = 0; ig < side; ++ig) {
      for (int ib = 0; ib < side; ++ib) {
        const NameProbabilities p = model.classify({centers[ir], centers[ig], centers[ib]});
        for (double v : p) {
          const float f = static_cast<float>(v);
          std::memcpy(dst, &f, sizeof(float));
          dst += sizeof(float);
        }
      }
    }
  }
  write_file_atomic(path, out);
}

NameProbabilities classify_pixel(const ColorNamingModel& model, const Rgb& rgb) {
  return model.classify(rgb);
}

GroupProbabilities group_probabilities(const NameProbabilities& p11) {
  GroupProbabilities g{};
  for (int n = 0; n < kNumColorNames; ++n) {
    g[static_cast<int>(kGroupOfName[n])] += p11[n];
  }
  return g;
}

ProbabilityMapSet::ProbabilityMapSet(int width, int height, int planes)
    : width_(width), height_(height), planes_(planes) {
  if (width < 1 || height < 1 || planes < 1) {
    throw Error(ErrorKind::kInvalidArgument, "probability map dimensions must be positive");
  }
  data_.assign(pixel_count() * planes, 0.0);
}

std::span<double> ProbabilityMapSet::plane(int k) {
  if (k < 0 || k >= planes_) throw Error(ErrorKind::kIndexOutOfRange, "plane index out of range");
  return std::span<double>(data_).subspan(k * pixel_count(), pixel_count());
}

std::span<const double> ProbabilityMapSet::plane(int k) const {
  if (k < 0 || k >= planes_) throw Error(ErrorKind::kIndexOutOfRange, "plane index out of range");
  return std::span<const double>(data_).subspan(k * pixel_count(), pixel_count());
}

ProbabilityMapSet compute_maps(const ColorNamingModel& model, const ImageBuffer& img,
                               bool grouped) {
  ProbabilityMapSet maps(img.width(), img.height(), grouped ? kNumColorGroups : kNumColorNames);
  const std::size_t n = img.pixel_count();
  for (std::size_t p = 0; p < n; ++p) {
    const NameProbabilities p11 = model.classify(img.pixel(p));
    if (grouped) {
      const GroupProbabilities g = group_probabilities(p11);
      for (int k = 0; k < kNumColorGroups; ++k) maps.at(k, p) = g[k];
    } else {
      for (int k = 0; k < kNumColorNames; ++k) maps.at(k, p) = p11[k];
    }
  }
  return maps;
}

ImageBuffer render_map_visualization(const ImageBuffer& img, const ProbabilityMapSet& maps,
                                     int plane) {
  if (plane < 0 || plane >= maps.planes()) {
    throw Error(ErrorKind::kIndexOutOfRange, "plane " + std::to_string(plane) + " of " +
                                                 std::to_string(maps.planes()));
  }
  if (img.width() != maps.width() || img.height() != maps.height()) {
    throw Error(ErrorKind::kDimensionMismatch, "image and probability maps differ in size");
  }
  ImageBuffer out(img.width(), img.height());
  const auto probs = maps.plane(plane);
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    const double w = probs[p];
    const Rgb src = img.pixel(p);
    out.set_pixel(p, {(1.0 - w) + w * src[0], (1.0 - w) + w * src[1], (1.0 - w) + w * src[2]});
  }
  return out;
}

ImageBuffer render_probability_plane(const ProbabilityMapSet& maps, int plane) {
  if (plane < 0 || plane >= maps.planes()) {
    throw Error(ErrorKind::kIndexOutOfRange, "plane " + std::to_string(plane) + " of " +
                                                 std::to_string(maps.planes()));
  }
  ImageBuffer out(maps.width(), maps.height());
  const auto probs = maps.plane(plane);
  for (std::size_t p = 0; p < maps.pixel_count(); ++p) out.set_pixel(p, {probs[p], probs[p], probs[p]});
  return out;
}

}  // namespace namedcurves
