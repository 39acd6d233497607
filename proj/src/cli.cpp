#include "namedcurves/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>

#include "namedcurves/curve_file.hpp"
#include "namedcurves/fitter.hpp"
#include "namedcurves/fusion.hpp"
#include "namedcurves/image.hpp"
#include "namedcurves/tone_curve.hpp"

namespace namedcurves::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kFileNotFound:
      return kExitMissingInput;
    case ErrorKind::kDimensionMismatch:
      return kExitDimensionMismatch;
    case ErrorKind::kUnsupportedFormat:
    case ErrorKind::kBadMagic:
    case ErrorKind::kNonNormalizedBin:
    case ErrorKind::kMalformedFile:
    case ErrorKind::kBadResolution:
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kDegenerateIncrements:
      return kExitInvalidArtifact;
    default:
      return kExitFailure;
  }
}

namespace {

// A CNLUT that exists but cannot be used is an invalid artifact, whatever the reason.
ColorNamingModel load_lut_artifact(const fs::path& path) {
  try {
    return load_cnlut(path);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kFileNotFound) throw;
    throw Error(ErrorKind::kMalformedFile, path.string() + ": " + e.what());
  }
}

}  // namespace

ColorNamingModel select_model(const std::optional<fs::path>& lut) {
  if (lut) return load_lut_artifact(*lut);
  if (const char* env = std::getenv("NAMEDCURVES_CNLUT"); env != nullptr && *env != '\0') {
    return load_lut_artifact(env);
  }
  return ColorNamingModel::parametric();
}

std::string format_fixed(double v, int decimals) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf;
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, decimals);
  std::string s(buf.data(), ptr);
  if (s.starts_with('-') && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

void print_report(std::ostream& os, const MetricsReport& report,
                  const std::vector<std::string>& keys) {
  for (const std::string& key : keys) {
    double v = 0.0;
    if (key == "psnr") {
      v = report.psnr;
    } else if (key == "ssim") {
      v = report.ssim;
    } else if (key == "de_ab") {
      v = report.de_ab;
    } else if (key == "de_00") {
      v = report.de_00;
    } else if (key == "loss" && report.loss) {
      v = *report.loss;
    } else {
      continue;
    }
    os << key << ": " << format_fixed(v, 4) << '\n';
  }
}

std::string batch_csv(const std::vector<BatchRow>& rows) {
  std::string out = "name,psnr_in,psnr_out,ssim_out,de00_in,de00_out,seconds\n";
  BatchRow mean{"mean"};
  auto row_line = [](const BatchRow& r) {
    return r.name + "," + format_fixed(r.psnr_in, 6) + "," + format_fixed(r.psnr_out, 6) + "," +
           format_fixed(r.ssim_out, 6) + "," + format_fixed(r.de00_in, 6) + "," +
           format_fixed(r.de00_out, 6) + "," + format_fixed(r.seconds, 3) + "\n";
  };
  for (const BatchRow& r : rows) {
    out += row_line(r);
    mean.psnr_in += r.psnr_in;
    mean.psnr_out += r.psnr_out;
    mean.ssim_out += r.ssim_out;
    mean.de00_in += r.de00_in;
    mean.de00_out += r.de00_out;
    mean.seconds += r.seconds;
  }
  if (!rows.empty()) {
    const double n = static_cast<double>(rows.size());
    mean.psnr_in /= n;
    mean.psnr_out /= n;
    mean.ssim_out /= n;
    mean.de00_in /= n;
    mean.de00_out /= n;
    mean.seconds /= n;
    out += row_line(mean);
  }
  return out;
}

namespace {

const std::vector<std::string> kAllMetrics = {"psnr", "ssim", "de_ab", "de_00"};

struct FitOptions {
  int iterations = 500;
  int points = kDefaultControlPoints;
  double tau = kDefaultFusionThreshold;
  double step = 0.05;
  int max_side = 256;
  double init_noise = 0.0;
  std::uint64_t seed = 0;

  FitConfig config() const {
    FitConfig cfg;
    cfg.iterations = iterations;
    cfg.control_points = points;
    cfg.tau = tau;
    cfg.step = step;
    cfg.max_side = max_side;
    cfg.init_noise = init_noise;
    cfg.seed = seed;
    return cfg;
  }
};

void add_fit_options(CLI::App* cmd, FitOptions& o) {
  cmd->add_option("--iters", o.iterations, "Optimizer iterations")->check(CLI::PositiveNumber);
  cmd->add_option("--points", o.points, "Control points per curve (M)")
      ->check(CLI::Range(2, kMaxControlPoints));
  cmd->add_option("--tau", o.tau, "Probability threshold for fusion")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--step", o.step, "Adam step size")->check(CLI::PositiveNumber);
  cmd->add_option("--max-side", o.max_side, "Longest side of the fitting image")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--init-noise", o.init_noise, "Std. dev. of seeded start perturbation");
  cmd->add_option("--seed", o.seed, "Seed for the start perturbation");
}

std::string stem_of(const fs::path& p) { return p.stem().string(); }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIoError, "cannot create directory " + dir.string());
}

std::string trace_summary(const std::vector<double>& trace) {
  std::ostringstream os;
  const std::size_t n = trace.size();
  for (const double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const std::size_t i = std::min(n - 1, static_cast<std::size_t>(frac * (n - 1)));
    os << "  iter " << i << ": " << format_double(trace[i], 6) << '\n';
  }
  return os.str();
}

int cmd_decompose(const fs::path& input, const fs::path& out_dir,
                  const std::optional<fs::path>& lut) {
  const ImageBuffer img = load_png(input);
  const ColorNamingModel model = select_model(lut);
  const ProbabilityMapSet maps = compute_maps(model, img, true);
  std::vector<std::pair<fs::path, ImageBuffer>> outputs;
  const std::string stem = stem_of(input);
  for (int g = 0; g < kNumColorGroups; ++g) {
    const std::string group(name_of(static_cast<ColorGroup>(g)));
    outputs.emplace_back(out_dir / (stem + "." + group + ".prob.png"),
                         render_probability_plane(maps, g));
    outputs.emplace_back(out_dir / (stem + "." + group + ".viz.png"),
                         render_map_visualization(img, maps, g));
  }
  ensure_dir(out_dir);
  for (const auto& [path, image] : outputs) save_png(image, path);
  std::cout << "wrote " << outputs.size() << " files to " << out_dir.string() << '\n';
  return kExitOk;
}

int cmd_fit(const fs::path& input_path, const fs::path& target_path, const fs::path& out,
            const FitOptions& opts, const std::optional<fs::path>& lut) {
  const ImageBuffer input = load_png(input_path);
  const ImageBuffer target = load_png(target_path);
  require_same_shape(input, target, "fit");
  const ColorNamingModel model = select_model(lut);
  const FitResult result = fit(input, target, model, opts.config());
  write_curve_file(result.curves, out);

  std::cout << "fit resolution: " << result.fit_width << "x" << result.fit_height << '\n'
            << "objective trace:\n"
            << trace_summary(result.trace) << "initial objective: "
            << format_double(result.initial_objective, 6) << '\n'
            << "best objective: " << format_double(result.best_objective, 6)
            << " (iteration " << result.best_iteration << ")\n";
  const MetricsReport before = evaluate(input, target);
  std::cout << "before:\n";
  print_report(std::cout, before, kAllMetrics);
  std::cout << "after:\n";
  print_report(std::cout, result.final_metrics, kAllMetrics);
  return kExitOk;
}

int cmd_apply(const fs::path& input_path, const fs::path& curves_path, const fs::path& out,
              double tau, const std::optional<fs::path>& lut) {
  const CurveSet curves = read_curve_file(curves_path);
  const ImageBuffer input = load_png(input_path);
  const ColorNamingModel model = select_model(lut);
  save_png(apply_fitted(curves, input, model, tau), out);
  return kExitOk;
}

int cmd_eval(const fs::path& a_path, const fs::path& b_path, const std::vector<std::string>& keys) {
  const ImageBuffer a = load_png(a_path);
  const ImageBuffer b = load_png(b_path);
  require_same_shape(a, b, "eval");
  print_report(std::cout, evaluate(a, b), keys);
  return kExitOk;
}

int cmd_fit_batch(const fs::path& root, const fs::path& out_dir, const FitOptions& opts,
                  const std::optional<fs::path>& lut, bool timing) {
  const fs::path input_dir = root / "input";
  const fs::path target_dir = root / "target";
  std::vector<fs::path> inputs;
  std::error_code ec;
  if (fs::is_directory(input_dir, ec)) {
    for (const auto& entry : fs::directory_iterator(input_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".png") inputs.push_back(entry.path());
    }
  }
  std::sort(inputs.begin(), inputs.end());
  if (inputs.empty()) {
    std::cerr << "error: no input/*.png pairs under " << root.string() << '\n';
    return kExitEmptyCorpus;
  }

  const ColorNamingModel model = select_model(lut);
  ensure_dir(out_dir);
  std::vector<BatchRow> rows;
  for (const fs::path& in_path : inputs) {
    const std::string name = in_path.filename().string();
    try {
      const auto start = std::chrono::steady_clock::now();
      const ImageBuffer input = load_png(in_path);
      const ImageBuffer target = load_png(target_dir / in_path.filename());
      require_same_shape(input, target, name.c_str());
      const FitResult result = fit(input, target, model, opts.config());
      const ImageBuffer output = apply_fitted(result.curves, input, model, opts.tau);
      write_curve_file(result.curves, out_dir / (stem_of(in_path) + ".ncv"));
      save_png(output, out_dir / (stem_of(in_path) + ".png"));
      const MetricsReport before = evaluate(input, target);
      const auto stop = std::chrono::steady_clock::now();
      rows.push_back({name, before.psnr, result.final_metrics.psnr, result.final_metrics.ssim,
                      before.de_00, result.final_metrics.de_00,
                      timing ? std::chrono::duration<double>(stop - start).count() : 0.0});
      std::cout << name << ": psnr " << format_fixed(before.psnr, 4) << " -> "
                << format_fixed(result.final_metrics.psnr, 4) << '\n';
    } catch (const Error& e) {
      std::cerr << "skipping " << name << ": " << e.what() << '\n';
    }
  }
  if (rows.empty()) {
    std::cerr << "error: no pair could be processed\n";
    return kExitFailure;
  }
  write_file_atomic(out_dir / "summary.csv", batch_csv(rows));
  return kExitOk;
}

int cmd_bake_lut(const fs::path& curves_path, int resolution, const fs::path& out_dir) {
  if (resolution < 2) {
    throw Error(ErrorKind::kBadResolution,
                "LUT resolution must be at least 2, got " + std::to_string(resolution));
  }
  const CurveSet curves = read_curve_file(curves_path);
  std::vector<std::pair<fs::path, std::string>> files;
  for (int g = 0; g < kNumColorGroups; ++g) {
    for (int c = 0; c < kNumChannels; ++c) {
      const auto group = static_cast<ColorGroup>(g);
      const auto channel = static_cast<Channel>(c);
      const TonemapLut lut = bake_lut(curves.curve(group, channel), resolution);
      std::string text;
      for (int r = 0; r < resolution; ++r) {
        const double x = static_cast<double>(r) / (resolution - 1);
        text += format_shortest(x) + " " + format_shortest(lut.samples()[r]) + "\n";
      }
      files.emplace_back(
          out_dir / (std::string(name_of(group)) + "." + std::string(name_of(channel)) + ".lut.txt"),
          std::move(text));
    }
  }
  ensure_dir(out_dir);
  for (const auto& [path, text] : files) write_file_atomic(path, text);
  return kExitOk;
}

int cmd_make_cnlut(const fs::path& out, int side) {
  save_cnlut(ColorNamingModel::parametric(), side, out);
  return kExitOk;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Color-naming tone-curve enhancement toolkit"};
  app.require_subcommand(1);

  std::optional<fs::path> lut;
  app.add_option("--lut", lut, "CNLUT color-naming table (default: $NAMEDCURVES_CNLUT or built-in)");

  fs::path a, b, c;
  FitOptions fit_opts;
  double tau = kDefaultFusionThreshold;
  int resolution = kDefaultLutResolution;
  int side = 32;
  bool no_timing = false;
  std::vector<std::string> metrics = kAllMetrics;

  auto* decompose = app.add_subcommand("decompose", "Write color-group probability maps");
  decompose->add_option("input", a, "Input PNG")->required();
  decompose->add_option("out-dir", b, "Output directory")->required();

  auto* fit_cmd = app.add_subcommand("fit", "Fit tone curves mapping input to target");
  fit_cmd->add_option("input", a, "Input PNG")->required();
  fit_cmd->add_option("target", b, "Target PNG")->required();
  fit_cmd->add_option("out-curves", c, "Output curve file")->required();
  add_fit_options(fit_cmd, fit_opts);

  auto* apply = app.add_subcommand("apply", "Apply a curve file to an image");
  apply->add_option("input", a, "Input PNG")->required();
  apply->add_option("curves", b, "Curve file")->required();
  apply->add_option("out", c, "Output PNG")->required();
  apply->add_option("--tau", tau, "Probability threshold for fusion")->check(CLI::Range(0.0, 1.0));

  auto* eval = app.add_subcommand("eval", "Compare two images");
  eval->add_option("a", a, "First PNG")->required();
  eval->add_option("b", b, "Second PNG")->required();
  eval->add_option("--metrics", metrics, "Subset of psnr,ssim,de_ab,de_00")
      ->delimiter(',')
      ->check(CLI::IsMember(kAllMetrics));

  auto* batch = app.add_subcommand("fit-batch", "Fit, apply and evaluate every pair of a corpus");
  batch->add_option("corpus", a, "Directory with input/ and target/")->required();
  batch->add_option("out-dir", b, "Output directory")->required();
  add_fit_options(batch, fit_opts);
  batch->add_flag("--no-timing", no_timing, "Write 0 in the seconds column");

  auto* bake = app.add_subcommand("bake-lut", "Sample every curve into a text LUT");
  bake->add_option("curves", a, "Curve file")->required();
  bake->add_option("out-dir", b, "Output directory")->required();
  bake->add_option("--resolution", resolution, "Samples per LUT");

  auto* make_lut = app.add_subcommand("make-cnlut", "Tabulate the built-in namer as a CNLUT file");
  make_lut->add_option("out", a, "Output CNLUT file")->required();
  make_lut->add_option("--side", side, "Bins per RGB axis")->check(CLI::Range(1, 256));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*decompose) return cmd_decompose(a, b, lut);
    if (*fit_cmd) return cmd_fit(a, b, c, fit_opts, lut);
    if (*apply) return cmd_apply(a, b, c, tau, lut);
    if (*eval) return cmd_eval(a, b, metrics);
    if (*batch) return cmd_fit_batch(a, b, fit_opts, lut, !no_timing);
    if (*bake) return cmd_bake_lut(a, resolution, b);
    if (*make_lut) return cmd_make_cnlut(a, side);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace namedcurves::cli
