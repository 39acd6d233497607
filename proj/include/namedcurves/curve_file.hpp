#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "namedcurves/tone_curve.hpp"

namespace namedcurves {

// Text format:
//   NCV 1 <M>
//   <group> <channel> <P_0> ... <P_{M-1}>      (18 lines)
// Values use 17 significant digits so parsing restores them bit for bit.

std::string serialize_curves(const CurveSet& curves);

/// Throws MalformedFile with a line number on any syntax or invariant error.
CurveSet parse_curves(std::string_view text);

CurveSet read_curve_file(const std::filesystem::path& path);
void write_curve_file(const CurveSet& curves, const std::filesystem::path& path);

/// Locale-independent double formatting.
std::string format_double(double v, int significant_digits);
std::string format_shortest(double v);

/// Writes content to a temporary sibling and renames it over path.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace namedcurves
