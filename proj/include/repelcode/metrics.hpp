#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "repelcode/geometry.hpp"

namespace repelcode {

/// Pairwise (cascade) summation with a fixed split order, so reductions are
/// reproducible regardless of how callers chunk the data.
inline double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t leaf = 64;
  if (values.size() <= leaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t mid = values.size() / 2;
  return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

inline double field_sum(const ScalarField& field) {
  return pairwise_sum(field.values());
}

/// Base-2 Shannon entropy of the non-zero coding values.
///
/// Strictly positive values are histogrammed into bin_count equal-width bins
/// over (0, max]; bin k covers (k*max/B, (k+1)*max/B]. Only the ratio
/// value/max enters the binning, so the result is invariant to rescaling.
inline double coding_entropy(const ScalarField& field, int bin_count = 8) {
  if (bin_count < 2) throw std::invalid_argument("bin count must be >= 2");
  double peak = 0.0;
  for (double v : field.values()) peak = std::max(peak, v);
  if (!(peak > 0)) return 0.0;

  std::vector<std::size_t> hist(bin_count, 0);
  std::size_t total = 0;
  for (double v : field.values()) {
    if (!(v > 0)) continue;
    const double scaled = (v / peak) * bin_count;
    int bin = static_cast<int>(std::ceil(scaled)) - 1;
    bin = std::clamp(bin, 0, bin_count - 1);
    ++hist[bin];
    ++total;
  }
  double entropy = 0.0;
  for (std::size_t count : hist) {
    if (count == 0) continue;
    const double p = static_cast<double>(count) / static_cast<double>(total);
    entropy -= p * std::log2(p);
  }
  // A single occupied bin yields -1*log2(1) = -0.0.
  return entropy == 0.0 ? 0.0 : entropy;
}

/// Fraction of the coding mass that lies inside the mask: sum(M*C)/sum(C).
inline double reversibility(const ScalarField& field, const BinaryMask& mask) {
  if (field.height() != mask.height() || field.width() != mask.width()) {
    throw std::invalid_argument("reversibility: mask and field dimensions differ");
  }
  const auto& v = field.values();
  std::vector<double> inside(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (mask.values()[i]) inside[i] = v[i];
  }
  const double total = pairwise_sum(v);
  if (!(total > 0)) {
    throw std::domain_error("reversibility undefined for a field with zero total mass");
  }
  return pairwise_sum(inside) / total;
}

inline double reversibility_dilated(const ScalarField& field, const CenterSet& labels,
                                    double diameter = 5.0) {
  return reversibility(field, dilate_disk(labels, diameter));
}

/// Sum of squared per-pixel differences.
inline double l2_distance(const ScalarField& a, const ScalarField& b) {
  require_same_shape(a, b, "l2_distance");
  std::vector<double> sq(a.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const double d = a.values()[i] - b.values()[i];
    sq[i] = d * d;
  }
  return pairwise_sum(sq);
}

struct CodingQuality {
  double entropy_bits = 0.0;
  double reversibility = 0.0;
  double reversibility_dilated = 0.0;
  int bin_count = 8;
  double dilation_diameter = 5.0;
};

/// Entropy, raw-mask reversibility and dilated reversibility of one coding.
inline CodingQuality assess_coding(const ScalarField& field, const CenterSet& labels,
                                   int bin_count = 8, double dilation_diameter = 5.0) {
  if (field.height() != labels.height() || field.width() != labels.width()) {
    throw std::invalid_argument("assess_coding: labels and field dimensions differ");
  }
  CodingQuality q;
  q.bin_count = bin_count;
  q.dilation_diameter = dilation_diameter;
  q.entropy_bits = coding_entropy(field, bin_count);
  q.reversibility = reversibility(field, dot_mask(labels));
  q.reversibility_dilated = reversibility_dilated(field, labels, dilation_diameter);
  return q;
}

}  // namespace repelcode
