#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "repelcode/geometry.hpp"

namespace repelcode {

struct MatchPair {
  std::size_t detection = 0;
  std::size_t truth = 0;
  double distance = 0.0;

  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

struct MatchReport {
  std::vector<MatchPair> pairs;
  std::size_t n_detections = 0;
  std::size_t n_truth = 0;
  std::size_t matched_within_threshold = 0;
  std::size_t unmatched_detections = 0;
  std::size_t unmatched_ground_truth = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1_standard = 0.0;
  double f1_paper_literal = 0.0;  // P*R/(P+R): half the usual F1
  double threshold = 0.0;
};

/// Greedy closest-pair matching.
///
/// Repeatedly takes the globally nearest unmatched (detection, truth) pair
/// and retires both points. Ties go to the smaller detection index, then the
/// smaller truth index. Each detection keeps its truths pre-sorted by
/// distance; a heap holds every open detection's best remaining truth, and
/// stale heap entries (truth already taken) advance that detection's cursor.
inline std::vector<MatchPair> greedy_match(const CenterSet& detections,
                                           const CenterSet& truth) {
  const std::size_t nd = detections.size();
  const std::size_t ng = truth.size();
  std::vector<MatchPair> pairs;
  if (nd == 0 || ng == 0) return pairs;

  using Key = std::tuple<std::int64_t, std::size_t, std::size_t>;  // d^2, det, gt
  std::vector<std::vector<std::pair<std::int64_t, std::size_t>>> ranked(nd);
  for (std::size_t i = 0; i < nd; ++i) {
    auto& row = ranked[i];
    row.reserve(ng);
    for (std::size_t j = 0; j < ng; ++j) {
      row.emplace_back(squared_distance(detections[i], truth[j]), j);
    }
    std::sort(row.begin(), row.end());
  }

  std::vector<std::size_t> cursor(nd, 0);
  std::vector<bool> truth_used(ng, false);
  std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
  for (std::size_t i = 0; i < nd; ++i) {
    heap.emplace(ranked[i][0].first, i, ranked[i][0].second);
  }

  const std::size_t target = std::min(nd, ng);
  while (pairs.size() < target) {
    const auto [d2, det, gt] = heap.top();
    heap.pop();
    if (truth_used[gt]) {
      auto& row = ranked[det];
      std::size_t& k = cursor[det];
      while (k < row.size() && truth_used[row[k].second]) ++k;
      heap.emplace(row[k].first, det, row[k].second);
      continue;
    }
    truth_used[gt] = true;
    pairs.push_back({det, gt, std::sqrt(static_cast<double>(d2))});
  }
  return pairs;
}

/// Matching plus precision, recall and both F1 variants.
///
/// Matching ignores the threshold; only pairs with distance <= threshold
/// count as hits afterwards. Both sets empty scores P = R = 1. An empty side
/// facing a non-empty one scores 0 for the undefined ratio.
inline MatchReport score(const CenterSet& detections, const CenterSet& truth,
                         double threshold) {
  if (!(threshold > 0)) throw std::invalid_argument("match threshold must be positive");
  MatchReport rep;
  rep.threshold = threshold;
  rep.n_detections = detections.size();
  rep.n_truth = truth.size();
  rep.pairs = greedy_match(detections, truth);
  for (const MatchPair& p : rep.pairs) {
    if (p.distance <= threshold) ++rep.matched_within_threshold;
  }
  rep.unmatched_detections = rep.n_detections - rep.pairs.size();
  rep.unmatched_ground_truth = rep.n_truth - rep.pairs.size();

  const auto hits = static_cast<double>(rep.matched_within_threshold);
  if (rep.n_detections == 0 && rep.n_truth == 0) {
    rep.precision = rep.recall = 1.0;
  } else {
    rep.precision = rep.n_detections ? hits / static_cast<double>(rep.n_detections) : 0.0;
    rep.recall = rep.n_truth ? hits / static_cast<double>(rep.n_truth) : 0.0;
  }
  const double sum = rep.precision + rep.recall;
  if (sum > 0) {
    rep.f1_paper_literal = rep.precision * rep.recall / sum;
    rep.f1_standard = 2.0 * rep.f1_paper_literal;
  }
  return rep;
}

/// Average cell radius used as the match threshold for a named dataset.
inline std::optional<double> dataset_threshold(std::string_view tag) {
  if (tag == "dg") return 8.0;
  if (tag == "adip") return 11.0;
  if (tag == "hbm") return 15.0;
  if (tag == "vgg") return 11.0;
  return std::nullopt;
}

}  // namespace repelcode
