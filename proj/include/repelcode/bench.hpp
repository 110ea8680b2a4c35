#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "repelcode/decoder.hpp"
#include "repelcode/encoders.hpp"
#include "repelcode/evaluator.hpp"
#include "repelcode/io.hpp"
#include "repelcode/metrics.hpp"
#include "repelcode/synth.hpp"
#include "repelcode/version.hpp"

namespace repelcode {

/// Sweep description for the end-to-end benchmark. Every field has a
/// resolved value after parsing; the resolved form is what gets written to
/// the run manifest.
struct BenchConfig {
  SceneSpec scene;  // seed is ignored; scene_seeds drives the sweep
  std::vector<std::uint64_t> scene_seeds{1, 2, 3, 4, 5};
  std::vector<Scheme> schemes{Scheme::dot, Scheme::proximity, Scheme::repel};
  CodingSpec coding;  // scheme is ignored; schemes drives the sweep
  int bins = 8;
  double dilate = 5.0;
  std::vector<double> blur_sigmas{0.5, 1.0, 2.0};
  std::vector<double> noise_sigmas{0.01, 0.05};
  std::uint64_t perturb_seed = 1;
  DecodeSpec decode;
  double match_threshold = 6.0;

  void validate() const {
    scene.validate();
    coding.validate();
    decode.validate();
    if (scene_seeds.empty()) throw std::invalid_argument("bench: no scene seeds");
    if (schemes.empty()) throw std::invalid_argument("bench: no schemes");
    if (blur_sigmas.empty() || noise_sigmas.empty()) {
      throw std::invalid_argument("bench: empty perturbation sweep");
    }
    if (bins < 2) throw std::invalid_argument("bench: bins must be >= 2");
    if (!(dilate >= 1)) throw std::invalid_argument("bench: dilate must be >= 1");
    if (!(match_threshold > 0)) throw std::invalid_argument("bench: eval threshold must be > 0");
    for (double s : blur_sigmas) PerturbSpec{s, 0.0, 0}.validate();
    for (double s : noise_sigmas) PerturbSpec{0.0, s, 0}.validate();
  }

  /// Seed used by perturb() for every cell of a given scene.
  std::uint64_t cell_perturb_seed(std::uint64_t scene_seed) const {
    return perturb_seed * 1000003ULL + scene_seed;
  }
};

namespace detail {

inline double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("config key '" + std::string(key) + "': expected number, got '" +
                                std::string(text) + "'");
  }
  return v;
}

inline std::uint64_t parse_u64(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("config key '" + std::string(key) +
                                "': expected non-negative integer, got '" + std::string(text) +
                                "'");
  }
  return v;
}

inline int parse_int_value(std::string_view key, std::string_view text) {
  const std::uint64_t v = parse_u64(key, text);
  if (v > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
    throw std::invalid_argument("config key '" + std::string(key) + "': value too large");
  }
  return static_cast<int>(v);
}

inline std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_same_v<T, double>) {
      out += format_number(items[i]);
    } else if constexpr (std::is_same_v<T, Scheme>) {
      out += to_string(items[i]);
    } else {
      out += std::to_string(items[i]);
    }
  }
  return out;
}

}  // namespace detail

/// Parses a flat "key = value" config with [scene], [coding], [perturb],
/// [decode] and [eval] sections. Unset coding, decode and eval parameters
/// are derived from scene.cell_radius.
inline BenchConfig parse_bench_config(const KeyValues& entries) {
  std::map<std::string, std::string> kv;
  for (const auto& [k, v] : entries) {
    if (!kv.emplace(k, v).second) throw std::invalid_argument("config: duplicate key '" + k + "'");
  }
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  using detail::parse_double;
  using detail::parse_int_value;
  using detail::parse_u64;

  BenchConfig cfg;
  SceneSpec& s = cfg.scene;
  if (auto v = take("scene.height")) s.height = parse_int_value("scene.height", *v);
  if (auto v = take("scene.width")) s.width = parse_int_value("scene.width", *v);
  if (auto v = take("scene.n_cells")) s.n_cells = parse_int_value("scene.n_cells", *v);
  if (auto v = take("scene.min_spacing")) s.min_spacing = parse_double("scene.min_spacing", *v);
  if (auto v = take("scene.crowded_fraction")) {
    s.crowded_fraction = parse_double("scene.crowded_fraction", *v);
  }
  if (auto v = take("scene.cell_radius")) s.cell_radius = parse_double("scene.cell_radius", *v);
  if (auto v = take("scene.seeds")) {
    cfg.scene_seeds.clear();
    for (auto item : detail::split_list(*v)) cfg.scene_seeds.push_back(parse_u64("scene.seeds", item));
  }
  if (!(s.cell_radius > 0)) throw std::invalid_argument("config: scene.cell_radius must be > 0");

  if (auto v = take("coding.schemes")) {
    cfg.schemes.clear();
    for (auto item : detail::split_list(*v)) {
      const Scheme sch = parse_scheme(item);
      if (std::find(cfg.schemes.begin(), cfg.schemes.end(), sch) == cfg.schemes.end()) {
        cfg.schemes.push_back(sch);
      }
    }
  }
  cfg.coding = CodingSpec::for_cell_radius(Scheme::repel, s.cell_radius);
  if (auto v = take("coding.alpha")) cfg.coding.alpha = parse_double("coding.alpha", *v);
  if (auto v = take("coding.radius_cutoff")) {
    cfg.coding.radius_cutoff = parse_double("coding.radius_cutoff", *v);
  }
  if (auto v = take("coding.sigma")) cfg.coding.sigma = parse_double("coding.sigma", *v);
  if (auto v = take("coding.kernel_size")) {
    cfg.coding.kernel_size = parse_int_value("coding.kernel_size", *v);
  }
  if (auto v = take("coding.normalization")) cfg.coding.normalization = parse_normalization(*v);
  if (auto v = take("coding.bins")) cfg.bins = parse_int_value("coding.bins", *v);
  if (auto v = take("coding.dilate")) cfg.dilate = parse_double("coding.dilate", *v);

  if (auto v = take("perturb.blur_sigma")) {
    cfg.blur_sigmas.clear();
    for (auto item : detail::split_list(*v)) {
      cfg.blur_sigmas.push_back(parse_double("perturb.blur_sigma", item));
    }
  }
  if (auto v = take("perturb.noise_sigma")) {
    cfg.noise_sigmas.clear();
    for (auto item : detail::split_list(*v)) {
      cfg.noise_sigmas.push_back(parse_double("perturb.noise_sigma", item));
    }
  }
  if (auto v = take("perturb.seed")) cfg.perturb_seed = parse_u64("perturb.seed", *v);

  cfg.decode.nms_radius = s.cell_radius;
  if (auto v = take("decode.nms_radius")) cfg.decode.nms_radius = parse_double("decode.nms_radius", *v);
  if (auto v = take("decode.threshold_mode")) cfg.decode.threshold_mode = parse_threshold_mode(*v);
  if (auto v = take("decode.threshold")) cfg.decode.threshold = parse_double("decode.threshold", *v);

  cfg.match_threshold = s.cell_radius;
  if (auto v = take("eval.dataset")) {
    const auto t = dataset_threshold(*v);
    if (!t) throw std::invalid_argument("config: unknown eval.dataset '" + *v + "'");
    cfg.match_threshold = *t;
  }
  if (auto v = take("eval.threshold")) cfg.match_threshold = parse_double("eval.threshold", *v);
  take("run.tool_version");

  if (!kv.empty()) throw std::invalid_argument("config: unknown key '" + kv.begin()->first + "'");

  // Canonical sweep order, independent of how the file lists values.
  std::sort(cfg.scene_seeds.begin(), cfg.scene_seeds.end());
  cfg.scene_seeds.erase(std::unique(cfg.scene_seeds.begin(), cfg.scene_seeds.end()),
                        cfg.scene_seeds.end());
  for (auto* sweep : {&cfg.blur_sigmas, &cfg.noise_sigmas}) {
    std::sort(sweep->begin(), sweep->end());
    sweep->erase(std::unique(sweep->begin(), sweep->end()), sweep->end());
  }
  cfg.validate();
  return cfg;
}

/// Fully resolved config in the same format parse_bench_config reads.
inline std::string bench_manifest(const BenchConfig& cfg) {
  using detail::join;
  std::ostringstream out;
  out << "# repelcode bench run manifest; rerun with: repelcode bench <this file> -o DIR\n";
  out << "[run]\ntool_version = " << kVersion << "\n\n";
  out << "[scene]\n";
  out << "height = " << cfg.scene.height << "\nwidth = " << cfg.scene.width
      << "\nn_cells = " << cfg.scene.n_cells
      << "\nmin_spacing = " << format_number(cfg.scene.min_spacing)
      << "\ncrowded_fraction = " << format_number(cfg.scene.crowded_fraction)
      << "\ncell_radius = " << format_number(cfg.scene.cell_radius)
      << "\nseeds = " << join(cfg.scene_seeds) << "\n\n";
  out << "[coding]\n";
  out << "schemes = " << join(cfg.schemes) << "\nalpha = " << format_number(cfg.coding.alpha)
      << "\nradius_cutoff = " << format_number(cfg.coding.radius_cutoff)
      << "\nsigma = " << format_number(cfg.coding.sigma)
      << "\nkernel_size = " << cfg.coding.kernel_size
      << "\nnormalization = " << to_string(cfg.coding.normalization) << "\nbins = " << cfg.bins
      << "\ndilate = " << format_number(cfg.dilate) << "\n\n";
  out << "[perturb]\n";
  out << "blur_sigma = " << join(cfg.blur_sigmas) << "\nnoise_sigma = " << join(cfg.noise_sigmas)
      << "\nseed = " << cfg.perturb_seed << "\n\n";
  out << "[decode]\n";
  out << "nms_radius = " << format_number(cfg.decode.nms_radius)
      << "\nthreshold_mode = " << to_string(cfg.decode.threshold_mode)
      << "\nthreshold = " << format_number(cfg.decode.threshold) << "\n\n";
  out << "[eval]\nthreshold = " << format_number(cfg.match_threshold) << "\n";
  return out.str();
}

struct BenchRow {
  std::uint64_t scene_seed = 0;
  Scheme scheme = Scheme::dot;
  double blur_sigma = 0.0;
  double noise_sigma = 0.0;
  std::uint64_t perturb_seed = 0;
  CodingQuality quality;
  MatchReport match;
  double count = 0.0;
};

struct BenchSummary {
  Scheme scheme = Scheme::dot;
  std::size_t cells = 0;
  double f1_mean = 0, f1_std = 0;
  double precision_mean = 0, recall_mean = 0;
  double entropy_mean = 0, entropy_std = 0;
  double r_mean = 0, r_std = 0;
  double r5_mean = 0, r5_std = 0;
  double count_error_mean = 0, count_error_std = 0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<BenchSummary> summary;
};

/// Coding spec used for one scheme of the sweep.
inline CodingSpec scheme_spec(const BenchConfig& cfg, Scheme scheme) {
  CodingSpec spec = cfg.coding;
  spec.scheme = scheme;
  return spec;
}

/// One benchmark cell. Fields are rounded to float32 after encoding and
/// after perturbation, matching the SFLD files the CLI stages exchange.
inline BenchRow run_cell(const BenchConfig& cfg, const CenterSet& labels,
                         std::uint64_t scene_seed, Scheme scheme, double blur, double noise) {
  BenchRow row;
  row.scene_seed = scene_seed;
  row.scheme = scheme;
  row.blur_sigma = blur;
  row.noise_sigma = noise;
  row.perturb_seed = cfg.cell_perturb_seed(scene_seed);

  const ScalarField clean = quantize_f32(encode(labels, scheme_spec(cfg, scheme)));
  row.quality = assess_coding(clean, labels, cfg.bins, cfg.dilate);
  const ScalarField noisy = quantize_f32(perturb(clean, {blur, noise, row.perturb_seed}));
  row.match = score(detect_local_maxima(noisy, cfg.decode), labels, cfg.match_threshold);
  row.count = count_by_integration(noisy);
  return row;
}

namespace detail {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

inline MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  out.mean = pairwise_sum(xs) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - out.mean) * (xs[i] - out.mean);
    out.std = std::sqrt(pairwise_sum(sq) / static_cast<double>(xs.size() - 1));
  }
  return out;
}

}  // namespace detail

/// Runs every (scene seed x perturbation x scheme) cell in canonical order
/// and summarizes each scheme with mean and sample std over its cells.
inline BenchResult run_benchmark(const BenchConfig& cfg) {
  cfg.validate();
  BenchResult result;
  for (std::uint64_t seed : cfg.scene_seeds) {
    SceneSpec scene = cfg.scene;
    scene.seed = seed;
    CenterSet labels;
    try {
      labels = generate_scene(scene);
    } catch (const std::exception& e) {
      throw std::runtime_error("bench cell scene_seed=" + std::to_string(seed) + ": " + e.what());
    }
    for (double blur : cfg.blur_sigmas) {
      for (double noise : cfg.noise_sigmas) {
        for (Scheme scheme : cfg.schemes) {
          try {
            result.rows.push_back(run_cell(cfg, labels, seed, scheme, blur, noise));
          } catch (const std::exception& e) {
            throw std::runtime_error("bench cell scene_seed=" + std::to_string(seed) +
                                     " scheme=" + std::string(to_string(scheme)) +
                                     " blur=" + format_number(blur) +
                                     " noise=" + format_number(noise) + ": " + e.what());
          }
        }
      }
    }
  }

  for (Scheme scheme : cfg.schemes) {
    std::vector<double> f1, prec, rec, ent, r, r5, cerr;
    for (const BenchRow& row : result.rows) {
      if (row.scheme != scheme) continue;
      f1.push_back(row.match.f1_standard);
      prec.push_back(row.match.precision);
      rec.push_back(row.match.recall);
      ent.push_back(row.quality.entropy_bits);
      r.push_back(row.quality.reversibility);
      r5.push_back(row.quality.reversibility_dilated);
      cerr.push_back(std::abs(row.count - static_cast<double>(row.match.n_truth)));
    }
    BenchSummary s;
    s.scheme = scheme;
    s.cells = f1.size();
    const auto f = detail::mean_std(f1);
    s.f1_mean = f.mean;
    s.f1_std = f.std;
    s.precision_mean = detail::mean_std(prec).mean;
    s.recall_mean = detail::mean_std(rec).mean;
    const auto e = detail::mean_std(ent);
    s.entropy_mean = e.mean;
    s.entropy_std = e.std;
    const auto rr = detail::mean_std(r);
    s.r_mean = rr.mean;
    s.r_std = rr.std;
    const auto rr5 = detail::mean_std(r5);
    s.r5_mean = rr5.mean;
    s.r5_std = rr5.std;
    const auto c = detail::mean_std(cerr);
    s.count_error_mean = c.mean;
    s.count_error_std = c.std;
    result.summary.push_back(s);
  }
  return result;
}

inline void write_bench_rows(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "scene_seed,scheme,blur_sigma,noise_sigma,perturb_seed,n_gt,n_det,precision,recall,"
         "f1,f1_paper_literal,count,entropy_bits,R,R5\n";
  for (const BenchRow& r : rows) {
    out << r.scene_seed << ',' << to_string(r.scheme) << ',' << format_number(r.blur_sigma) << ','
        << format_number(r.noise_sigma) << ',' << r.perturb_seed << ',' << r.match.n_truth << ','
        << r.match.n_detections << ',' << format_number(r.match.precision) << ','
        << format_number(r.match.recall) << ',' << format_number(r.match.f1_standard) << ','
        << format_number(r.match.f1_paper_literal) << ',' << format_number(r.count) << ','
        << format_number(r.quality.entropy_bits) << ',' << format_number(r.quality.reversibility)
        << ',' << format_number(r.quality.reversibility_dilated) << '\n';
  }
}

inline void write_bench_summary(std::ostream& out, const std::vector<BenchSummary>& summary) {
  out << "scheme,cells,f1_mean,f1_std,precision_mean,recall_mean,entropy_mean,entropy_std,"
         "R_mean,R_std,R5_mean,R5_std,count_abs_error_mean,count_abs_error_std\n";
  for (const BenchSummary& s : summary) {
    out << to_string(s.scheme) << ',' << s.cells << ',' << format_number(s.f1_mean) << ','
        << format_number(s.f1_std) << ',' << format_number(s.precision_mean) << ','
        << format_number(s.recall_mean) << ',' << format_number(s.entropy_mean) << ','
        << format_number(s.entropy_std) << ',' << format_number(s.r_mean) << ','
        << format_number(s.r_std) << ',' << format_number(s.r5_mean) << ','
        << format_number(s.r5_std) << ',' << format_number(s.count_error_mean) << ','
        << format_number(s.count_error_std) << '\n';
  }
}

/// Writes cells.csv, summary.csv and manifest.txt into dir.
inline void write_bench_outputs(const std::filesystem::path& dir, const BenchConfig& cfg,
                                const BenchResult& result) {
  std::filesystem::create_directories(dir);
  {
    auto out = detail::open_out((dir / "cells.csv").string());
    write_bench_rows(out, result.rows);
  }
  {
    auto out = detail::open_out((dir / "summary.csv").string());
    write_bench_summary(out, result.summary);
  }
  {
    auto out = detail::open_out((dir / "manifest.txt").string());
    out << bench_manifest(cfg);
  }
}

}  // namespace repelcode
