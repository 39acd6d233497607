#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "namedcurves/color_naming.hpp"
#include "namedcurves/error.hpp"
#include "namedcurves/metrics.hpp"

namespace namedcurves::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitMissingInput = 2;
inline constexpr int kExitDimensionMismatch = 3;
inline constexpr int kExitInvalidArtifact = 4;
inline constexpr int kExitEmptyCorpus = 5;

int exit_code_for(ErrorKind kind);

/// --lut wins, then $NAMEDCURVES_CNLUT, then the parametric namer.
ColorNamingModel select_model(const std::optional<std::filesystem::path>& lut);

/// Fixed-point with the given decimals; "inf"/"nan" for non-finite values.
std::string format_fixed(double v, int decimals);

/// One "key: value" line per requested metric, 4 decimals.
void print_report(std::ostream& os, const MetricsReport& report,
                  const std::vector<std::string>& keys);

struct BatchRow {
  std::string name;
  double psnr_in = 0.0;
  double psnr_out = 0.0;
  double ssim_out = 0.0;
  double de00_in = 0.0;
  double de00_out = 0.0;
  double seconds = 0.0;
};

/// CSV with a header, one row per pair and a final "mean" row.
std::string batch_csv(const std::vector<BatchRow>& rows);

/// Entry point of the namedcurves executable.
int run(int argc, char** argv);

}  // namespace namedcurves::cli
