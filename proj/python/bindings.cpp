#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>

#include "namedcurves/color.hpp"
#include "namedcurves/color_naming.hpp"
#include "namedcurves/curve_file.hpp"
#include "namedcurves/error.hpp"
#include "namedcurves/fitter.hpp"
#include "namedcurves/image.hpp"
#include "namedcurves/metrics.hpp"
#include "namedcurves/tone_curve.hpp"

namespace py = pybind11;
using namespace namedcurves;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// (H, W, 3) float array <-> interleaved ImageBuffer.
ImageBuffer to_image(const Array& a) {
  if (a.ndim() != 3 || a.shape(2) != 3) {
    throw Error(ErrorKind::kInvalidArgument, "expected an array of shape (H, W, 3)");
  }
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  return ImageBuffer(w, h, std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const ImageBuffer& img) {
  Array out({static_cast<py::ssize_t>(img.height()), static_cast<py::ssize_t>(img.width()),
             py::ssize_t{3}});
  std::copy(img.data().begin(), img.data().end(), out.mutable_data());
  return out;
}

ColorNamingModel model_or_default(const std::optional<ColorNamingModel>& model) {
  return model ? *model : ColorNamingModel::parametric();
}

ColorGroup parse_group(const std::string& name) {
  for (int g = 0; g < kNumColorGroups; ++g) {
    if (name_of(static_cast<ColorGroup>(g)) == name) return static_cast<ColorGroup>(g);
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown color group: " + name);
}

Channel parse_channel(const std::string& name) {
  for (int c = 0; c < kNumChannels; ++c) {
    if (name_of(static_cast<Channel>(c)) == name) return static_cast<Channel>(c);
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown channel: " + name);
}

py::dict report_dict(const MetricsReport& r) {
  py::dict d;
  d["psnr"] = r.psnr;
  d["ssim"] = r.ssim;
  d["de_ab"] = r.de_ab;
  d["de_00"] = r.de_00;
  return d;
}

}  // namespace

PYBIND11_MODULE(_namedcurves, m) {
  m.doc() = "Color-naming guided tone curves";

  auto error = py::register_exception<Error>(m, "NamedCurvesError", PyExc_RuntimeError);
  (void)error;

  m.attr("COLOR_NAMES") = [] {
    py::list names;
    for (int k = 0; k < kNumColorNames; ++k) names.append(std::string(name_of(static_cast<ColorName>(k))));
    return names;
  }();
  m.attr("COLOR_GROUPS") = [] {
    py::list names;
    for (int g = 0; g < kNumColorGroups; ++g) names.append(std::string(name_of(static_cast<ColorGroup>(g))));
    return names;
  }();

  py::class_<ColorNamingModel>(m, "ColorNamingModel")
      .def_static("parametric", [] { return ColorNamingModel::parametric(); })
      .def_static("load", &load_cnlut, py::arg("path"))
      .def("save", [](const ColorNamingModel& self, const std::filesystem::path& path, int side) {
             save_cnlut(self, side, path);
           },
           py::arg("path"), py::arg("side") = 32)
      .def_property_readonly("backend", [](const ColorNamingModel& self) {
        return self.backend() == ColorNamingModel::Backend::kLut ? "lut" : "parametric";
      })
      .def("classify", [](const ColorNamingModel& self, const Rgb& rgb) { return classify_pixel(self, rgb); },
           py::arg("rgb"))
      .def("classify_groups",
           [](const ColorNamingModel& self, const Rgb& rgb) {
             return group_probabilities(classify_pixel(self, rgb));
           },
           py::arg("rgb"));

  py::class_<CurveSet>(m, "CurveSet")
      .def(py::init<int>(), py::arg("control_points") = kDefaultControlPoints)
      .def_static("identity", &CurveSet::identity, py::arg("control_points") = kDefaultControlPoints)
      .def_property_readonly("control_points", &CurveSet::control_points)
      .def("curve",
           [](const CurveSet& self, const std::string& group, const std::string& channel) {
             return self.curve(parse_group(group), parse_channel(channel)).points;
           },
           py::arg("group"), py::arg("channel"))
      .def("set_curve",
           [](CurveSet& self, const std::string& group, const std::string& channel,
              std::vector<double> points) {
             self.set_curve(parse_group(group), parse_channel(channel), ControlPoints{std::move(points)});
           },
           py::arg("group"), py::arg("channel"), py::arg("points"))
      .def("to_text", &serialize_curves)
      .def_static("from_text", [](const std::string& text) { return parse_curves(text); }, py::arg("text"))
      .def("__eq__", [](const CurveSet& a, const CurveSet& b) { return a == b; });

  m.def("read_curves", &read_curve_file, py::arg("path"));
  m.def("write_curves", [](const CurveSet& curves, const std::filesystem::path& path) {
          write_curve_file(curves, path);
        },
        py::arg("curves"), py::arg("path"));

  m.def("load_png", [](const std::filesystem::path& path) { return to_array(load_png(path)); },
        py::arg("path"));
  m.def("save_png", [](const Array& img, const std::filesystem::path& path) { save_png(to_image(img), path); },
        py::arg("image"), py::arg("path"));

  m.def("srgb_to_lab",
        [](const Rgb& rgb) {
          const LabPixel p = srgb_to_lab(rgb);
          return py::make_tuple(p.L, p.a, p.b);
        },
        py::arg("rgb"));

  m.def("compute_maps",
        [](const Array& img, std::optional<ColorNamingModel> model, bool grouped) {
          const ProbabilityMapSet maps = compute_maps(model_or_default(model), to_image(img), grouped);
          py::array_t<double> out({static_cast<py::ssize_t>(maps.planes()),
                                   static_cast<py::ssize_t>(maps.height()),
                                   static_cast<py::ssize_t>(maps.width())});
          double* dst = out.mutable_data();
          for (int k = 0; k < maps.planes(); ++k) {
            const auto plane = maps.plane(k);
            dst = std::copy(plane.begin(), plane.end(), dst);
          }
          return out;
        },
        py::arg("image"), py::arg("model") = std::nullopt, py::arg("grouped") = true,
        "Per-pixel probabilities as a (K, H, W) array, K = 6 groups or 11 names.");

  m.def("normalize_increments",
        [](const std::vector<double>& deltas) { return normalize_increments(deltas).points; },
        py::arg("deltas"));
  m.def("bezier_eval",
        [](const std::vector<double>& points, double t) { return bezier_eval(ControlPoints{points}, t); },
        py::arg("points"), py::arg("t"));
  m.def("de_casteljau_eval",
        [](const std::vector<double>& points, double t) {
          return de_casteljau_eval(ControlPoints{points}, t);
        },
        py::arg("points"), py::arg("t"));

  m.def("mse", [](const Array& a, const Array& b) { return mse(to_image(a), to_image(b)); });
  m.def("psnr", [](const Array& a, const Array& b) { return psnr(to_image(a), to_image(b)); });
  m.def("ssim", [](const Array& a, const Array& b) { return ssim(to_image(a), to_image(b)); });
  m.def("delta_e_ab", [](const Array& a, const Array& b) { return delta_e_ab(to_image(a), to_image(b)); });
  m.def("delta_e_00", [](const Array& a, const Array& b) { return delta_e_00(to_image(a), to_image(b)); });
  m.def("delta_e_00_lab",
        [](const std::array<double, 3>& x, const std::array<double, 3>& y) {
          return delta_e_00(LabPixel{x[0], x[1], x[2]}, LabPixel{y[0], y[1], y[2]});
        },
        py::arg("lab1"), py::arg("lab2"));
  m.def("evaluate", [](const Array& a, const Array& b) { return report_dict(evaluate(to_image(a), to_image(b))); });

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("curves", &FitResult::curves)
      .def_readonly("trace", &FitResult::trace)
      .def_readonly("initial_objective", &FitResult::initial_objective)
      .def_readonly("best_objective", &FitResult::best_objective)
      .def_readonly("best_iteration", &FitResult::best_iteration)
      .def_property_readonly("fit_shape",
                             [](const FitResult& r) { return py::make_tuple(r.fit_height, r.fit_width); })
      .def_property_readonly("metrics", [](const FitResult& r) { return report_dict(r.final_metrics); });

  m.def("fit",
        [](const Array& input, const Array& target, std::optional<ColorNamingModel> model, int iterations,
           double step, int control_points, int max_side, double tau, double init_noise,
           std::uint64_t seed) {
          FitConfig cfg;
          cfg.iterations = iterations;
          cfg.step = step;
          cfg.control_points = control_points;
          cfg.max_side = max_side;
          cfg.tau = tau;
          cfg.init_noise = init_noise;
          cfg.seed = seed;
          const ImageBuffer in = to_image(input);
          const ImageBuffer tg = to_image(target);
          const ColorNamingModel chosen = model_or_default(model);
          py::gil_scoped_release release;
          return fit(in, tg, chosen, cfg);
        },
        py::arg("input"), py::arg("target"), py::arg("model") = std::nullopt,
        py::arg("iterations") = FitConfig{}.iterations, py::arg("step") = FitConfig{}.step,
        py::arg("control_points") = FitConfig{}.control_points, py::arg("max_side") = FitConfig{}.max_side,
        py::arg("tau") = FitConfig{}.tau, py::arg("init_noise") = FitConfig{}.init_noise,
        py::arg("seed") = FitConfig{}.seed);

  m.def("apply_fitted",
        [](const CurveSet& curves, const Array& img, std::optional<ColorNamingModel> model, double tau) {
          return to_array(apply_fitted(curves, to_image(img), model_or_default(model), tau));
        },
        py::arg("curves"), py::arg("image"), py::arg("model") = std::nullopt,
        py::arg("tau") = kDefaultFusionThreshold);
}
