#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "repelcode/field.hpp"

namespace repelcode {

/// Raw dot labels: integer cell centers on an H x W grid.
///
/// Construction validates bounds and rejects duplicate coordinates. The
/// center order is preserved; it only matters for index-bearing outputs such
/// as match pairs.
class CenterSet {
 public:
  CenterSet() = default;
  CenterSet(int height, int width, std::vector<Pixel> centers = {})
      : height_(height), width_(width), centers_(std::move(centers)) {
    if (height <= 0 || width <= 0) {
      throw std::invalid_argument("center set dimensions must be positive");
    }
    std::set<Pixel> seen;
    for (const Pixel& p : centers_) {
      if (p.row < 0 || p.row >= height_ || p.col < 0 || p.col >= width_) {
        throw std::out_of_range("center (" + std::to_string(p.row) + "," +
                                std::to_string(p.col) + ") outside " +
                                std::to_string(height_) + "x" +
                                std::to_string(width_) + " grid");
      }
      if (!seen.insert(p).second) {
        throw std::invalid_argument("duplicate center (" +
                                    std::to_string(p.row) + "," +
                                    std::to_string(p.col) + ")");
      }
    }
  }

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return centers_.size(); }
  bool empty() const { return centers_.empty(); }
  const std::vector<Pixel>& centers() const { return centers_; }
  const Pixel& operator[](std::size_t i) const { return centers_[i]; }

  auto begin() const { return centers_.begin(); }
  auto end() const { return centers_.end(); }

  friend bool operator==(const CenterSet&, const CenterSet&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<Pixel> centers_;
};

/// Distances from every pixel to its nearest and second-nearest center.
struct DistanceFields {
  ScalarField nearest;  // +inf when there are no centers
  ScalarField second;   // +inf when there are fewer than two centers
};

namespace detail {

/// Uniform bucket grid over the centers, used to bound the nearest-neighbor
/// search to a growing square ring of buckets around each pixel.
class CenterBuckets {
 public:
  explicit CenterBuckets(const CenterSet& labels) {
    const double area = static_cast<double>(labels.height()) * labels.width();
    const double per_bucket =
        std::sqrt(area / static_cast<double>(std::max<std::size_t>(1, labels.size())));
    side_ = std::max(1, static_cast<int>(per_bucket));
    rows_ = (labels.height() + side_ - 1) / side_;
    cols_ = (labels.width() + side_ - 1) / side_;
    buckets_.resize(static_cast<std::size_t>(rows_) * cols_);
    for (const Pixel& p : labels) {
      buckets_[bucket_index(p.row / side_, p.col / side_)].push_back(p);
    }
  }

  int side() const { return side_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<Pixel>& at(int br, int bc) const {
    return buckets_[bucket_index(br, bc)];
  }

 private:
  std::size_t bucket_index(int br, int bc) const {
    return static_cast<std::size_t>(br) * cols_ + bc;
  }

  int side_ = 1;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::vector<Pixel>> buckets_;
};

/// Calls visit(bucket_row, bucket_col) for every in-range bucket on the
/// Chebyshev ring of radius k around (br, bc).
template <typename Visit>
void for_each_ring_bucket(const CenterBuckets& b, int br, int bc, int k,
                          Visit&& visit) {
  if (k == 0) {
    visit(br, bc);
    return;
  }
  for (int r = br - k; r <= br + k; ++r) {
    if (r < 0 || r >= b.rows()) continue;
    const bool edge_row = (r == br - k || r == br + k);
    const int step = edge_row ? 1 : 2 * k;
    for (int c = bc - k; c <= bc + k; c += step) {
      if (c < 0 || c >= b.cols()) continue;
      visit(r, c);
    }
  }
}

}  // namespace detail

/// Exact Euclidean nearest and second-nearest center distance at every pixel.
///
/// Squared distances are compared as integers and converted with a single
/// sqrt, so the result is bit-identical to an exhaustive search.
inline DistanceFields distance_fields(const CenterSet& labels) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const int h = labels.height();
  const int w = labels.width();
  DistanceFields out{ScalarField(h, w, inf), ScalarField(h, w, inf)};
  if (labels.empty()) return out;

  constexpr std::int64_t none = std::numeric_limits<std::int64_t>::max();
  const detail::CenterBuckets buckets(labels);
  const int side = buckets.side();
  const int max_ring = std::max(buckets.rows(), buckets.cols());

  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      const Pixel p{row, col};
      std::int64_t best1 = none;
      std::int64_t best2 = none;
      const int br = row / side;
      const int bc = col / side;
      for (int k = 0; k <= max_ring; ++k) {
        detail::for_each_ring_bucket(buckets, br, bc, k, [&](int r, int c) {
          for (const Pixel& q : buckets.at(r, c)) {
            const std::int64_t d = squared_distance(p, q);
            if (d < best1) {
              best2 = best1;
              best1 = d;
            } else if (d < best2) {
              best2 = d;
            }
          }
        });
        // Centers in ring k+1 differ by at least k*side+1 along one axis.
        const std::int64_t bound = static_cast<std::int64_t>(k) * side + 1;
        if (best2 != none && best2 <= bound * bound) break;
      }
      out.nearest(row, col) = std::sqrt(static_cast<double>(best1));
      if (best2 != none) out.second(row, col) = std::sqrt(static_cast<double>(best2));
    }
  }
  return out;
}

/// Binary dot mask: true exactly at the center pixels.
inline BinaryMask dot_mask(const CenterSet& labels) {
  BinaryMask mask(labels.height(), labels.width(), 0);
  for (const Pixel& p : labels) mask[p] = 1;
  return mask;
}

/// Dilates the dot labels with a closed Euclidean disk of the given diameter
/// (pixel p is set when some center lies within diameter/2 of it).
inline BinaryMask dilate_disk(const CenterSet& labels, double diameter) {
  if (!(diameter >= 1.0) || !std::isfinite(diameter)) {
    throw std::invalid_argument("dilation diameter must be >= 1, got " +
                                std::to_string(diameter));
  }
  BinaryMask mask(labels.height(), labels.width(), 0);
  const double radius = diameter / 2.0;
  const int reach = static_cast<int>(std::floor(radius));
  const double radius_sq = radius * radius;
  for (const Pixel& c : labels) {
    for (int dr = -reach; dr <= reach; ++dr) {
      for (int dc = -reach; dc <= reach; ++dc) {
        if (dr * dr + dc * dc > radius_sq) continue;
        const int r = c.row + dr;
        const int col = c.col + dc;
        if (mask.contains(r, col)) mask(r, col) = 1;
      }
    }
  }
  return mask;
}

}  // namespace repelcode
