#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "repelcode/geometry.hpp"
#include "repelcode/metrics.hpp"

namespace repelcode {

enum class ThresholdMode { absolute, relative_to_max };

inline std::string_view to_string(ThresholdMode m) {
  return m == ThresholdMode::absolute ? "absolute" : "relative_to_max";
}

inline ThresholdMode parse_threshold_mode(std::string_view name) {
  if (name == "absolute") return ThresholdMode::absolute;
  if (name == "relative_to_max" || name == "relative") return ThresholdMode::relative_to_max;
  throw std::invalid_argument("unknown threshold mode '" + std::string(name) + "'");
}

struct DecodeSpec {
  double nms_radius = 11.0;
  ThresholdMode threshold_mode = ThresholdMode::relative_to_max;
  double threshold = 0.1;

  void validate() const {
    if (!(nms_radius > 0) || !std::isfinite(nms_radius)) {
      throw std::invalid_argument("nms radius must be positive and finite");
    }
    if (!(threshold >= 0) || !std::isfinite(threshold)) {
      throw std::invalid_argument("threshold must be non-negative");
    }
    if (threshold_mode == ThresholdMode::relative_to_max && threshold > 1) {
      throw std::invalid_argument("relative threshold must lie in [0, 1]");
    }
  }

  double resolve_threshold(const ScalarField& field) const {
    if (threshold_mode == ThresholdMode::absolute) return threshold;
    double peak = 0.0;
    for (double v : field.values()) peak = std::max(peak, v);
    return threshold * peak;
  }
};

namespace detail {

/// Lattice offsets within a closed disk, excluding the origin.
inline std::vector<Pixel> disk_offsets(double radius) {
  std::vector<Pixel> out;
  const int reach = static_cast<int>(std::floor(radius));
  const double r2 = radius * radius;
  for (int dr = -reach; dr <= reach; ++dr) {
    for (int dc = -reach; dc <= reach; ++dc) {
      if ((dr != 0 || dc != 0) && dr * dr + dc * dc <= r2) out.push_back({dr, dc});
    }
  }
  return out;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // The smaller index always becomes the root.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

/// Non-maximum suppression over a circular neighborhood.
///
/// A pixel is a candidate when it exceeds the resolved threshold and is >=
/// every pixel within nms_radius. Candidates that are equal-valued and within
/// max(nms_radius, sqrt 2) of each other form one plateau; each plateau emits
/// its lexicographically smallest pixel. Output is sorted by (row, col).
inline CenterSet detect_local_maxima(const ScalarField& field, const DecodeSpec& spec) {
  spec.validate();
  const int h = field.height();
  const int w = field.width();
  const double cut = spec.resolve_threshold(field);
  const std::vector<Pixel> window = detail::disk_offsets(spec.nms_radius);

  std::vector<Pixel> candidates;
  Grid<int> slot(h, w, -1);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double v = field(r, c);
      if (!(v > cut)) continue;
      bool dominant = true;
      for (const Pixel& o : window) {
        const int rr = r + o.row;
        const int cc = c + o.col;
        if (field.contains(rr, cc) && field(rr, cc) > v) {
          dominant = false;
          break;
        }
      }
      if (dominant) {
        slot(r, c) = static_cast<int>(candidates.size());
        candidates.push_back({r, c});
      }
    }
  }

  const std::vector<Pixel> link =
      detail::disk_offsets(std::max(spec.nms_radius, std::sqrt(2.0)));
  detail::DisjointSets sets(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Pixel p = candidates[i];
    for (const Pixel& o : link) {
      const int rr = p.row + o.row;
      const int cc = p.col + o.col;
      if (!slot.contains(rr, cc) || slot(rr, cc) < 0) continue;
      if (field(rr, cc) == field[p]) sets.unite(i, static_cast<std::size_t>(slot(rr, cc)));
    }
  }

  // Candidates are discovered in row-major order and roots are the smallest
  // member index, so each root is its plateau's lexicographic minimum.
  std::vector<Pixel> peaks;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (sets.find(i) == i) peaks.push_back(candidates[i]);
  }
  return CenterSet(h, w, std::move(peaks));
}

/// Total mass of a density coding, read as the cell count.
inline double count_by_integration(const ScalarField& field) { return field_sum(field); }

}  // namespace repelcode
