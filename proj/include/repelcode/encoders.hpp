#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "repelcode/geometry.hpp"

namespace repelcode {

enum class Scheme { dot, gaussian, rectangle, proximity, repel };
enum class Normalization { raw, peak_one, unit_mass };

inline std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::dot: return "dot";
    case Scheme::gaussian: return "gaussian";
    case Scheme::rectangle: return "rect";
    case Scheme::proximity: return "proximity";
    case Scheme::repel: return "repel";
  }
  return "?";
}

inline std::string_view to_string(Normalization n) {
  switch (n) {
    case Normalization::raw: return "raw";
    case Normalization::peak_one: return "peak_one";
    case Normalization::unit_mass: return "unit_mass";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view name) {
  if (name == "dot") return Scheme::dot;
  if (name == "gaussian") return Scheme::gaussian;
  if (name == "rect" || name == "rectangle") return Scheme::rectangle;
  if (name == "proximity") return Scheme::proximity;
  if (name == "repel") return Scheme::repel;
  throw std::invalid_argument("unknown coding scheme '" + std::string(name) + "'");
}

inline Normalization parse_normalization(std::string_view name) {
  if (name == "raw") return Normalization::raw;
  if (name == "peak_one") return Normalization::peak_one;
  if (name == "unit_mass") return Normalization::unit_mass;
  throw std::invalid_argument("unknown normalization '" + std::string(name) + "'");
}

/// Scheme selector plus every encoder parameter.
///
/// alpha and radius_cutoff drive proximity/repel decay and support, sigma the
/// Gaussian width, kernel_size the box side. Parameters that the selected
/// scheme does not use are still validated.
struct CodingSpec {
  Scheme scheme = Scheme::repel;
  double alpha = 0.8;
  double radius_cutoff = 22.0;
  double sigma = 5.5;
  int kernel_size = 23;
  Normalization normalization = Normalization::unit_mass;

  /// Defaults scaled to an average cell radius: r = 2*radius,
  /// sigma = radius/2, box side = 2*radius + 1 forced odd.
  static CodingSpec for_cell_radius(Scheme scheme, double cell_radius) {
    if (!(cell_radius > 0)) {
      throw std::invalid_argument("cell radius must be positive");
    }
    CodingSpec spec;
    spec.scheme = scheme;
    spec.radius_cutoff = 2.0 * cell_radius;
    spec.sigma = cell_radius / 2.0;
    int k = static_cast<int>(std::lround(2.0 * cell_radius)) + 1;
    if (k % 2 == 0) ++k;
    spec.kernel_size = k;
    return spec;
  }

  void validate() const {
    if (!(alpha > 0) || !std::isfinite(alpha)) {
      throw std::invalid_argument("alpha must be positive and finite");
    }
    if (!(radius_cutoff > 0)) {
      throw std::invalid_argument("radius cutoff must be positive");
    }
    if (!(sigma > 0) || !std::isfinite(sigma)) {
      throw std::invalid_argument("sigma must be positive and finite");
    }
    if (kernel_size < 1 || kernel_size % 2 == 0) {
      throw std::invalid_argument("kernel size must be odd and >= 1, got " +
                                  std::to_string(kernel_size));
    }
  }
};

/// Normalized, 3-sigma truncated 1D Gaussian; index i holds the weight at
/// offset i - half.
inline std::vector<double> gaussian_kernel_1d(double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
  const int half = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * half + 1);
  double total = 0.0;
  for (int i = -half; i <= half; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    k[i + half] = v;
    total += v;
  }
  for (double& v : k) v /= total;
  return k;
}

namespace detail {

inline void scale_to_peak_one(ScalarField& field) {
  const auto& v = field.values();
  const double peak = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  if (peak <= 0) return;
  for (double& x : field.values()) x /= peak;
}

/// Adds a separable kernel (row weights x col weights, both centered) at
/// every center. With renormalize, each center's in-bounds weights are
/// rescaled to sum to 1.
inline ScalarField splat_separable(const CenterSet& labels,
                                   const std::vector<double>& kernel,
                                   bool renormalize) {
  ScalarField field(labels.height(), labels.width(), 0.0);
  const int half = static_cast<int>(kernel.size() / 2);
  for (const Pixel& c : labels) {
    const int r0 = std::max(0, c.row - half);
    const int r1 = std::min(labels.height() - 1, c.row + half);
    const int c0 = std::max(0, c.col - half);
    const int c1 = std::min(labels.width() - 1, c.col + half);
    double scale = 1.0;
    if (renormalize) {
      double row_mass = 0.0, col_mass = 0.0;
      for (int r = r0; r <= r1; ++r) row_mass += kernel[r - c.row + half];
      for (int k = c0; k <= c1; ++k) col_mass += kernel[k - c.col + half];
      scale = 1.0 / (row_mass * col_mass);
    }
    for (int r = r0; r <= r1; ++r) {
      const double wr = kernel[r - c.row + half] * scale;
      for (int k = c0; k <= c1; ++k) {
        field(r, k) += wr * kernel[k - c.col + half];
      }
    }
  }
  return field;
}

/// Maps an effective distance to 1/(1 + alpha*d) inside the cutoff, 0 outside.
inline double decay(double d, double alpha, double cutoff) {
  return d < cutoff ? 1.0 / (1.0 + alpha * d) : 0.0;
}

}  // namespace detail

/// 1 at every center pixel, 0 elsewhere.
inline ScalarField encode_dot(const CenterSet& labels) {
  ScalarField field(labels.height(), labels.width(), 0.0);
  for (const Pixel& p : labels) field[p] = 1.0;
  return field;
}

inline ScalarField encode_proximity(const CenterSet& labels, const CodingSpec& spec) {
  spec.validate();
  const DistanceFields dist = distance_fields(labels);
  ScalarField field(labels.height(), labels.width(), 0.0);
  auto& out = field.values();
  const auto& d1 = dist.nearest.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = detail::decay(d1[i], spec.alpha, spec.radius_cutoff);
  }
  return field;
}

/// Proximity decay applied to the nearest distance inflated by the
/// second-nearest: D' = d1 * (1 + d1/d2)^2. Values between neighboring
/// centers are pushed down, deepening the valley that separates them.
inline ScalarField encode_repel(const CenterSet& labels, const CodingSpec& spec) {
  spec.validate();
  const DistanceFields dist = distance_fields(labels);
  ScalarField field(labels.height(), labels.width(), 0.0);
  auto& out = field.values();
  const auto& d1 = dist.nearest.values();
  const auto& d2 = dist.second.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    // d2 == inf gives a factor of exactly 1.
    const double ratio = 1.0 + d1[i] / d2[i];
    const double suppressed = d1[i] * ratio * ratio;
    out[i] = detail::decay(suppressed, spec.alpha, spec.radius_cutoff);
  }
  return field;
}

/// Dot labels convolved with an isotropic Gaussian truncated at 3 sigma.
inline ScalarField encode_gaussian(const CenterSet& labels, const CodingSpec& spec) {
  spec.validate();
  ScalarField field =
      detail::splat_separable(labels, gaussian_kernel_1d(spec.sigma),
                              spec.normalization == Normalization::unit_mass);
  if (spec.normalization == Normalization::peak_one) detail::scale_to_peak_one(field);
  return field;
}

/// Dot labels convolved with a k x k moving-average kernel.
inline ScalarField encode_rectangle(const CenterSet& labels, const CodingSpec& spec) {
  spec.validate();
  const int k = spec.kernel_size;
  const std::vector<double> box(k, 1.0 / k);
  ScalarField field = detail::splat_separable(
      labels, box, spec.normalization == Normalization::unit_mass);
  if (spec.normalization == Normalization::peak_one) detail::scale_to_peak_one(field);
  return field;
}

inline ScalarField encode(const CenterSet& labels, const CodingSpec& spec) {
  spec.validate();
  switch (spec.scheme) {
    case Scheme::dot: return encode_dot(labels);
    case Scheme::gaussian: return encode_gaussian(labels, spec);
    case Scheme::rectangle: return encode_rectangle(labels, spec);
    case Scheme::proximity: return encode_proximity(labels, spec);
    case Scheme::repel: return encode_repel(labels, spec);
  }
  throw std::logic_error("unhandled coding scheme");
}

}  // namespace repelcode
