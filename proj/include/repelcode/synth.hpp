#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "repelcode/encoders.hpp"
#include "repelcode/geometry.hpp"

namespace repelcode {

/// Portable random stream on top of std::mt19937_64, whose output sequence is
/// fixed by the standard. Conversions are spelled out so that any other
/// implementation can reproduce the same draws:
///   uniform()  = (x >> 11) * 2^-53, in [0, 1)
///   below(n)   = floor(uniform() * n)
///   normal()   = Box-Muller cosine branch, sqrt(-2 ln(1 - u1)) * cos(2 pi u2)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  int below(int n) {
    const int v = static_cast<int>(uniform() * n);
    return v < n ? v : n - 1;
  }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

struct SceneSpec {
  int height = 128;
  int width = 128;
  int n_cells = 30;
  double min_spacing = 6.0;
  double crowded_fraction = 0.5;
  double cell_radius = 6.0;
  std::uint64_t seed = 1;

  /// Number of cells placed with a near neighbor. A lone crowded cell is
  /// impossible, so a count of 1 is raised to 2.
  int crowded_cells() const {
    const int n = static_cast<int>(std::lround(crowded_fraction * n_cells));
    return n == 1 ? 2 : n;
  }

  void validate() const {
    if (height <= 0 || width <= 0) throw std::invalid_argument("scene dimensions must be positive");
    if (n_cells < 0) throw std::invalid_argument("n_cells must be >= 0");
    if (!(min_spacing >= 0)) throw std::invalid_argument("min_spacing must be >= 0");
    if (!(cell_radius > 0)) throw std::invalid_argument("cell_radius must be positive");
    if (!(crowded_fraction >= 0 && crowded_fraction <= 1)) {
      throw std::invalid_argument("crowded_fraction must lie in [0, 1]");
    }
    if (crowded_cells() > 0 && !(std::max(min_spacing, 1.0) < 2.0 * cell_radius)) {
      throw std::invalid_argument(
          "crowded cells need min_spacing < 2*cell_radius to form near-pairs");
    }
    if (crowded_cells() > n_cells) {
      throw std::invalid_argument("a single cell cannot have a crowded neighbor");
    }
  }
};

/// Rejection-sampled label-only scene.
///
/// round(crowded_fraction * n_cells) cells are placed as near-pairs: an
/// anchor anywhere, then a partner at distance in [min_spacing, 2*radius). An
/// odd leftover crowded cell joins an already placed crowded cell. Remaining
/// cells keep at least max(min_spacing, 2*radius) from every cell, so exactly
/// the crowded cells have a neighbor closer than 2*radius. The attempt budget
/// is 1000 * n_cells draws.
inline CenterSet generate_scene(const SceneSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<Pixel> placed;
  placed.reserve(spec.n_cells);
  const int n_crowded = spec.crowded_cells();
  const double crowd_limit = 2.0 * spec.cell_radius;
  // Distinct integer centers are at least 1 apart.
  const double spacing = std::max(spec.min_spacing, 1.0);
  const double min_sq = spacing * spacing;
  const double isolation = std::max(spec.min_spacing, crowd_limit);
  const double isolated_sq = isolation * isolation;
  const long long budget = 1000LL * spec.n_cells;
  long long attempts = 0;
  std::size_t first_isolated = 0;  // placed[first_isolated..] are isolated cells

  auto spend = [&](const char* constraint) {
    if (++attempts > budget) {
      throw std::runtime_error("scene placement failed after " + std::to_string(budget) +
                               " attempts: cannot satisfy " + constraint + " (seed " +
                               std::to_string(spec.seed) + ")");
    }
  };
  auto fits = [&](Pixel p, double crowded_sq) {
    for (std::size_t i = 0; i < placed.size(); ++i) {
      const double d2 = static_cast<double>(squared_distance(p, placed[i]));
      if (d2 < (i >= first_isolated ? isolated_sq : crowded_sq)) return false;
    }
    return true;
  };
  auto random_pixel = [&] { return Pixel{rng.below(spec.height), rng.below(spec.width)}; };
  auto near_pixel = [&](Pixel anchor) {
    const double dist = spacing + rng.uniform() * (crowd_limit - spacing);
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    return Pixel{anchor.row + static_cast<int>(std::lround(dist * std::sin(angle))),
                 anchor.col + static_cast<int>(std::lround(dist * std::cos(angle)))};
  };
  auto is_near = [&](Pixel a, Pixel b) {
    const double d2 = static_cast<double>(squared_distance(a, b));
    return d2 >= min_sq && d2 < crowd_limit * crowd_limit;
  };

  // While crowded cells are being placed no isolated cells exist yet.
  first_isolated = static_cast<std::size_t>(spec.n_cells);
  const char* pair_constraint = "min_spacing between near-pair cells";
  auto in_grid = [&](Pixel p) {
    return p.row >= 0 && p.row < spec.height && p.col >= 0 && p.col < spec.width;
  };
  while (static_cast<int>(placed.size()) + 2 <= n_crowded) {
    spend(pair_constraint);
    const Pixel anchor = random_pixel();
    if (!fits(anchor, min_sq)) continue;
    const Pixel partner = near_pixel(anchor);
    if (!in_grid(partner) || !is_near(anchor, partner) || !fits(partner, min_sq)) continue;
    placed.push_back(anchor);
    placed.push_back(partner);
  }
  while (static_cast<int>(placed.size()) < n_crowded) {
    spend(pair_constraint);
    const auto pick = static_cast<std::size_t>(rng.below(static_cast<int>(placed.size())));
    const Pixel extra = near_pixel(placed[pick]);
    if (!in_grid(extra) || !is_near(placed[pick], extra) || !fits(extra, min_sq)) continue;
    placed.push_back(extra);
  }

  first_isolated = placed.size();
  while (static_cast<int>(placed.size()) < spec.n_cells) {
    spend("isolation distance max(min_spacing, 2*cell_radius) for non-crowded cells");
    const Pixel p = random_pixel();
    if (!fits(p, isolated_sq)) continue;
    placed.push_back(p);
  }
  return CenterSet(spec.height, spec.width, std::move(placed));
}

struct PerturbSpec {
  double blur_sigma = 1.0;
  double noise_sigma = 0.01;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(blur_sigma >= 0) || !std::isfinite(blur_sigma)) {
      throw std::invalid_argument("blur_sigma must be finite and >= 0");
    }
    if (!(noise_sigma >= 0) || !std::isfinite(noise_sigma)) {
      throw std::invalid_argument("noise_sigma must be finite and >= 0");
    }
  }
};

/// Separable Gaussian blur with a normalized 3-sigma kernel and zero padding.
inline ScalarField gaussian_blur(const ScalarField& field, double sigma) {
  const std::vector<double> k = gaussian_kernel_1d(sigma);
  const int half = static_cast<int>(k.size() / 2);
  const int h = field.height();
  const int w = field.width();
  ScalarField tmp(h, w, 0.0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double s = 0.0;
      for (int o = -half; o <= half; ++o) {
        const int cc = c + o;
        if (cc >= 0 && cc < w) s += k[o + half] * field(r, cc);
      }
      tmp(r, c) = s;
    }
  }
  ScalarField out(h, w, 0.0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double s = 0.0;
      for (int o = -half; o <= half; ++o) {
        const int rr = r + o;
        if (rr >= 0 && rr < h) s += k[o + half] * tmp(rr, c);
      }
      out(r, c) = s;
    }
  }
  return out;
}

/// Emulates an imperfect network output: blur, additive pixel noise drawn in
/// row-major order, then clamping at zero. Zero sigmas skip their stage.
inline ScalarField perturb(const ScalarField& field, const PerturbSpec& spec) {
  spec.validate();
  ScalarField out = spec.blur_sigma > 0 ? gaussian_blur(field, spec.blur_sigma) : field;
  if (spec.noise_sigma > 0) {
    Rng rng(spec.seed);
    for (double& v : out.values()) v += spec.noise_sigma * rng.normal();
  }
  for (double& v : out.values()) v = std::max(v, 0.0);
  return out;
}

}  // namespace repelcode
