#include "namedcurves/fitter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "namedcurves/error.hpp"

namespace namedcurves {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus_inverse(double y) {
  if (y <= 0.0) return -40.0;
  if (y > 30.0) return y + std::log(-std::expm1(-y));
  return std::log(std::expm1(y));
}

void check_params(const FitParams& params) {
  if (params.m < 2 || params.m > kMaxControlPoints) {
    throw Error(ErrorKind::kInvalidArgument, "control point count out of range");
  }
  if (params.theta.size() != static_cast<std::size_t>(kNumColorGroups) * kNumChannels * (params.m - 1)) {
    throw Error(ErrorKind::kInvalidArgument, "theta has the wrong length");
  }
}

void check_inputs(const ImageBuffer& input, const ImageBuffer& target, const FusionWeights& weights) {
  require_same_shape(input, target, "objective");
  if (input.width() != weights.width() || input.height() != weights.height()) {
    throw Error(ErrorKind::kDimensionMismatch, "fusion weights do not match the image size");
  }
}

// Maps dL/dP for one curve (length M) onto dL/dtheta for its M-1 parameters.
void chain_to_theta(std::span<const double> theta, std::span<const double> grad_points,
                    std::span<double> grad_theta) {
  const std::size_t k_count = theta.size();
  std::array<double, kMaxControlPoints> deltas{};
  double total = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    deltas[k] = softplus(theta[k]);
    total += deltas[k];
  }
  // P_m = C_m / S for m = 1..M-1, so dP_m/dDelta_k = ([k <= m] - P_m) / S.
  double weighted = 0.0;
  double running = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    running += deltas[k];
    weighted += grad_points[k + 1] * (running / total);
  }
  double suffix = 0.0;
  for (std::size_t k = k_count; k-- > 0;) {
    suffix += grad_points[k + 1];
    grad_theta[k] = (suffix - weighted) / total * sigmoid(theta[k]);
  }
}

}  // namespace

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

FitParams::FitParams(int m) : m(m) {
  if (m < 2 || m > kMaxControlPoints) {
    throw Error(ErrorKind::kInvalidArgument, "control point count out of range");
  }
  theta.assign(static_cast<std::size_t>(kNumColorGroups) * kNumChannels * (m - 1), 0.0);
}

CurveSet FitParams::to_curves() const {
  check_params(*this);
  CurveSet cs(m);
  std::vector<double> deltas(m - 1);
  for (int g = 0; g < kNumColorGroups; ++g) {
    for (int c = 0; c < kNumChannels; ++c) {
      const auto group = static_cast<ColorGroup>(g);
      const auto channel = static_cast<Channel>(c);
      const std::size_t off = offset(group, channel);
      for (int k = 0; k < m - 1; ++k) deltas[k] = softplus(theta[off + k]);
      cs.set_curve(group, channel, normalize_increments(deltas));
    }
  }
  return cs;
}

FitParams FitParams::from_curves(const CurveSet& cs) {
  FitParams params(cs.control_points());
  for (int g = 0; g < kNumColorGroups; ++g) {
    for (int c = 0; c < kNumChannels; ++c) {
      const auto group = static_cast<ColorGroup>(g);
      const auto channel = static_cast<Channel>(c);
      const auto& p = cs.curve(group, channel).points;
      const std::size_t off = params.offset(group, channel);
      for (int k = 0; k < params.m - 1; ++k) {
        params.theta[off + k] = softplus_inverse(p[k + 1] - p[k]);
      }
    }
  }
  return params;
}

double objective(const FitParams& params, const ImageBuffer& input, const ImageBuffer& target,
                 const FusionWeights& weights) {
  check_inputs(input, target, weights);
  const ImageBuffer out = blend(apply_curveset(params.to_curves(), input), weights);
  return mse(out, target);
}

std::vector<double> gradient(const FitParams& params, const ImageBuffer& input,
                             const ImageBuffer& target, const FusionWeights& weights) {
  check_inputs(input, target, weights);
  const CurveSet curves = params.to_curves();
  const int m = params.m;
  const std::size_t n = input.pixel_count();
  const double scale = 2.0 / (3.0 * static_cast<double>(n));

  // dL/dP, laid out like theta but with M entries per curve.
  std::vector<double> grad_points(static_cast<std::size_t>(kNumColorGroups) * kNumChannels * m, 0.0);
  std::array<double, kMaxControlPoints> basis;
  for (std::size_t p = 0; p < n; ++p) {
    for (int c = 0; c < kNumChannels; ++c) {
      const double x = clamp01(input.data()[3 * p + c]);
      bernstein_basis(m, x, basis);
      double pred = 0.0;
      for (int g = 0; g < kNumColorGroups; ++g) {
        const double w = weights.at(g, p);
        if (w == 0.0) continue;
        const auto& cp = curves.curve(static_cast<ColorGroup>(g), static_cast<Channel>(c)).points;
        double b = 0.0;
        for (int k = 0; k < m; ++k) b += cp[k] * basis[k];
        pred += w * b;
      }
      const double r = scale * (pred - target.data()[3 * p + c]);
      for (int g = 0; g < kNumColorGroups; ++g) {
        const double w = weights.at(g, p);
        if (w == 0.0) continue;
        double* gp = grad_points.data() + (static_cast<std::size_t>(g) * kNumChannels + c) * m;
        for (int k = 0; k < m; ++k) gp[k] += r * w * basis[k];
      }
    }
  }

  std::vector<double> grad(params.size(), 0.0);
  for (int g = 0; g < kNumColorGroups; ++g) {
    for (int c = 0; c < kNumChannels; ++c) {
      const std::size_t curve = static_cast<std::size_t>(g) * kNumChannels + c;
      const std::size_t off = curve * (m - 1);
      chain_to_theta(std::span<const double>(params.theta).subspan(off, m - 1),
                     std::span<const double>(grad_points).subspan(curve * m, m),
                     std::span<double>(grad).subspan(off, m - 1));
    }
  }
  return grad;
}

QuadraticObjective::QuadraticObjective(const ImageBuffer& input, const ImageBuffer& target,
                                       const FusionWeights& weights, int m)
    : m_(m), dim_(kNumColorGroups * m) {
  check_inputs(input, target, weights);
  if (m < 2 || m > kMaxControlPoints) {
    throw Error(ErrorKind::kInvalidArgument, "control point count out of range");
  }
  const std::size_t n = input.pixel_count();
  scale_ = 1.0 / (3.0 * static_cast<double>(n));
  for (int c = 0; c < kNumChannels; ++c) {
    gram_[c].assign(static_cast<std::size_t>(dim_) * dim_, 0.0);
    linear_[c].assign(dim_, 0.0);
  }

  std::array<double, kMaxControlPoints> basis;
  std::array<int, kNumColorGroups> active;
  for (std::size_t p = 0; p < n; ++p) {
    int n_active = 0;
    for (int g = 0; g < kNumColorGroups; ++g) {
      if (weights.at(g, p) != 0.0) active[n_active++] = g;
    }
    for (int c = 0; c < kNumChannels; ++c) {
      const double x = clamp01(input.data()[3 * p + c]);
      const double y = target.data()[3 * p + c];
      bernstein_basis(m, x, basis);
      constant_[c] += y * y;
      auto& gram = gram_[c];
      auto& lin = linear_[c];
      for (int i = 0; i < n_active; ++i) {
        const int gi = active[i];
        const double wi = weights.at(gi, p);
        for (int k = 0; k < m; ++k) lin[gi * m + k] += wi * basis[k] * y;
        for (int j = 0; j < n_active; ++j) {
          const int gj = active[j];
          const double wij = wi * weights.at(gj, p);
          for (int k = 0; k < m; ++k) {
            const double a = wij * basis[k];
            double* row = gram.data() + static_cast<std::size_t>(gi * m + k) * dim_ + gj * m;
            for (int l = 0; l < m; ++l) row[l] += a * basis[l];
          }
        }
      }
    }
  }
}

double QuadraticObjective::value(const FitParams& params) const {
  std::vector<double> unused(params.size());
  return value_and_gradient(params, unused);
}

double QuadraticObjective::value_and_gradient(const FitParams& params, std::span<double> grad) const {
  check_params(params);
  if (params.m != m_) throw Error(ErrorKind::kInvalidArgument, "parameter M does not match objective");
  const CurveSet curves = params.to_curves();
  std::vector<double> stacked(dim_);
  std::vector<double> grad_points(m_);
  double total = 0.0;
  for (int c = 0; c < kNumChannels; ++c) {
    for (int g = 0; g < kNumColorGroups; ++g) {
      const auto& cp = curves.curve(static_cast<ColorGroup>(g), static_cast<Channel>(c)).points;
      std::copy(cp.begin(), cp.end(), stacked.begin() + g * m_);
    }
    const auto& gram = gram_[c];
    const auto& lin = linear_[c];
    // A P - l, then value = P.(A P) - 2 l.P + k.
    std::vector<double> ap(dim_, 0.0);
    double quad = 0.0;
    double cross = 0.0;
    for (int i = 0; i < dim_; ++i) {
      const double* row = gram.data() + static_cast<std::size_t>(i) * dim_;
      double acc = 0.0;
      for (int j = 0; j < dim_; ++j) acc += row[j] * stacked[j];
      ap[i] = acc;
      quad += stacked[i] * acc;
      cross += lin[i] * stacked[i];
    }
    total += quad - 2.0 * cross + constant_[c];

    for (int g = 0; g < kNumColorGroups; ++g) {
      for (int k = 0; k < m_; ++k) grad_points[k] = 2.0 * scale_ * (ap[g * m_ + k] - lin[g * m_ + k]);
      const std::size_t off = params.offset(static_cast<ColorGroup>(g), static_cast<Channel>(c));
      chain_to_theta(std::span<const double>(params.theta).subspan(off, m_ - 1), grad_points,
                     grad.subspan(off, m_ - 1));
    }
  }
  return std::max(0.0, total * scale_);
}

FitResult fit(const ImageBuffer& input, const ImageBuffer& target, const ColorNamingModel& model,
              const FitConfig& cfg) {
  require_same_shape(input, target, "fit");
  if (cfg.iterations < 1) throw Error(ErrorKind::kInvalidArgument, "iterations must be >= 1");
  if (!(cfg.step > 0.0)) throw Error(ErrorKind::kInvalidArgument, "step size must be > 0");

  const ImageBuffer small_input = downsample_to(input, cfg.max_side);
  const ImageBuffer small_target = downsample_to(target, cfg.max_side);
  const FusionWeights weights = make_weights(compute_maps(model, small_input, true), cfg.tau);
  const QuadraticObjective quad(small_input, small_target, weights, cfg.control_points);

  const FitParams identity(cfg.control_points);
  FitParams params(cfg.control_points);
  if (cfg.init_noise > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> noise(0.0, cfg.init_noise);
    for (double& t : params.theta) t = noise(rng);
  }

  FitResult result;
  result.fit_width = small_input.width();
  result.fit_height = small_input.height();
  result.trace.reserve(cfg.iterations + 1);

  std::vector<double> grad(params.size());
  std::vector<double> m1(params.size(), 0.0);
  std::vector<double> m2(params.size(), 0.0);
  FitParams best = params;
  double best_value = std::numeric_limits<double>::infinity();
  double b1_pow = 1.0;
  double b2_pow = 1.0;
  for (int it = 0; it <= cfg.iterations; ++it) {
    const double value = quad.value_and_gradient(params, grad);
    result.trace.push_back(value);
    if (value < best_value) {
      best_value = value;
      best = params;
      result.best_iteration = it;
    }
    if (it == cfg.iterations) break;
    b1_pow *= cfg.beta1;
    b2_pow *= cfg.beta2;
    for (std::size_t i = 0; i < params.size(); ++i) {
      m1[i] = cfg.beta1 * m1[i] + (1.0 - cfg.beta1) * grad[i];
      m2[i] = cfg.beta2 * m2[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
      const double m_hat = m1[i] / (1.0 - b1_pow);
      const double v_hat = m2[i] / (1.0 - b2_pow);
      params.theta[i] -= cfg.step * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
  }

  // The fast path is exact up to rounding; settle the never-worse guarantee on
  // the pixel-wise objective.
  result.initial_objective = objective(identity, small_input, small_target, weights);
  double chosen = objective(best, small_input, small_target, weights);
  if (chosen > result.initial_objective) {
    best = identity;
    chosen = result.initial_objective;
    result.best_iteration = -1;
  }
  result.best_objective = chosen;
  result.curves = best.to_curves();

  const ImageBuffer out = apply_fitted(result.curves, input, model, cfg.tau);
  result.final_metrics = evaluate(out, target);
  return result;
}

ImageBuffer apply_fitted(const CurveSet& curves, const ImageBuffer& input,
                         const ColorNamingModel& model, double tau) {
  const FusionWeights weights = make_weights(compute_maps(model, input, true), tau);
  return blend(apply_curveset(curves, input), weights);
}

}  // namespace namedcurves
