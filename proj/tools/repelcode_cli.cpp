// repelcode: command-line front end for encoding dot labels, scoring codings,
// decoding coded maps, evaluating detections and running benchmarks.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "repelcode/png_export.hpp"
#include "repelcode/repelcode.hpp"

namespace fs = std::filesystem;
using namespace repelcode;

namespace {

std::string sidecar(const std::string& path) { return path + ".manifest"; }

KeyValues run_header(const std::string& subcommand) {
  return {{"subcommand", subcommand}, {"tool_version", kVersion}};
}

// Writes CSV text to the named file, or stdout when the path is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

// Grid bounds for center files when the caller gives none: the smallest grid
// holding every listed center.
CenterSet read_centers_inferred(const std::string& path, std::optional<int> height,
                                std::optional<int> width) {
  if (height && width) return read_centers_csv(path, *height, *width);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  const CenterSet loose = read_centers_csv(in, 1 << 30, 1 << 30);
  int h = 1, w = 1;
  for (const Pixel& p : loose) {
    h = std::max(h, p.row + 1);
    w = std::max(w, p.col + 1);
  }
  return CenterSet(height.value_or(h), width.value_or(w), loose.centers());
}

struct EncodeArgs {
  std::string scheme = "repel";
  std::optional<double> alpha, radius, sigma;
  std::optional<int> kernel_size;
  std::string norm = "unit_mass";
  double cell_radius = 8.0;
  std::string input, output;
  int height = 0, width = 0;
};

void run_encode(const EncodeArgs& a) {
  CodingSpec spec = CodingSpec::for_cell_radius(parse_scheme(a.scheme), a.cell_radius);
  if (a.alpha) spec.alpha = *a.alpha;
  if (a.radius) spec.radius_cutoff = *a.radius;
  if (a.sigma) spec.sigma = *a.sigma;
  if (a.kernel_size) spec.kernel_size = *a.kernel_size;
  spec.normalization = parse_normalization(a.norm);
  spec.validate();

  const CenterSet labels = read_centers_csv(a.input, a.height, a.width);
  write_sfld(a.output, encode(labels, spec));

  KeyValues m = run_header("encode");
  m.insert(m.end(), {{"input", a.input},
                     {"output", a.output},
                     {"height", std::to_string(a.height)},
                     {"width", std::to_string(a.width)},
                     {"scheme", std::string(to_string(spec.scheme))},
                     {"alpha", format_number(spec.alpha)},
                     {"radius_cutoff", format_number(spec.radius_cutoff)},
                     {"sigma", format_number(spec.sigma)},
                     {"kernel_size", std::to_string(spec.kernel_size)},
                     {"normalization", std::string(to_string(spec.normalization))},
                     {"cell_radius", format_number(a.cell_radius)}});
  write_manifest(sidecar(a.output), m);
}

// Scheme name for a field: explicit flag, else the encode sidecar, else unknown.
std::string scheme_of(const std::string& field_path, const std::string& flag) {
  if (!flag.empty()) return flag;
  const std::string side = sidecar(field_path);
  if (fs::exists(side)) {
    for (const auto& [k, v] : read_key_values(side)) {
      if (k == "scheme") return v;
    }
  }
  return "unknown";
}

struct MetricsArgs {
  std::vector<std::string> inputs;
  std::string labels;
  int bins = 8;
  double dilate = 5.0;
  std::string scheme;
  std::string output;
};

void run_metrics(const MetricsArgs& a) {
  std::string csv = "scheme,entropy_bits,R,R5,bin_count\n";
  for (const std::string& path : a.inputs) {
    const ScalarField field = read_sfld(path);
    const CenterSet labels = read_centers_csv(a.labels, field.height(), field.width());
    const CodingQuality q = assess_coding(field, labels, a.bins, a.dilate);
    csv += scheme_of(path, a.scheme) + "," + format_number(q.entropy_bits) + "," +
           format_number(q.reversibility) + "," + format_number(q.reversibility_dilated) + "," +
           std::to_string(q.bin_count) + "\n";
  }
  emit(a.output, csv);
}

struct DecodeArgs {
  std::string input, output;
  double nms_radius = 8.0;
  double threshold = 0.1;
  std::string mode = "relative_to_max";
  bool count = false;
};

void run_decode(const DecodeArgs& a) {
  const ScalarField field = read_sfld(a.input);
  if (a.count) {
    emit(a.output, "count\n" + format_number(count_by_integration(field)) + "\n");
    return;
  }
  DecodeSpec spec;
  spec.nms_radius = a.nms_radius;
  spec.threshold = a.threshold;
  spec.threshold_mode = parse_threshold_mode(a.mode);
  const CenterSet peaks = detect_local_maxima(field, spec);
  if (a.output.empty()) {
    write_centers_csv(std::cout, peaks);
    return;
  }
  write_centers_csv(a.output, peaks);
  KeyValues m = run_header("decode");
  m.insert(m.end(), {{"input", a.input},
                     {"output", a.output},
                     {"height", std::to_string(field.height())},
                     {"width", std::to_string(field.width())},
                     {"nms_radius", format_number(spec.nms_radius)},
                     {"threshold_mode", std::string(to_string(spec.threshold_mode))},
                     {"threshold", format_number(spec.threshold)}});
  write_manifest(sidecar(a.output), m);
}

struct EvalArgs {
  std::string detections, truth, output;
  std::optional<double> threshold;
  std::string dataset;
  std::optional<int> height, width;
};

void run_eval(const EvalArgs& a) {
  double threshold = 0.0;
  if (a.threshold) {
    threshold = *a.threshold;
  } else if (!a.dataset.empty()) {
    const auto t = dataset_threshold(a.dataset);
    if (!t) throw std::invalid_argument("unknown dataset '" + a.dataset + "'");
    threshold = *t;
  } else {
    throw std::invalid_argument("eval needs --threshold or --dataset");
  }
  const CenterSet det = read_centers_inferred(a.detections, a.height, a.width);
  const CenterSet gt = read_centers_inferred(a.truth, a.height, a.width);
  const MatchReport r = score(det, gt, threshold);
  emit(a.output, "precision,recall,f1,f1_paper_literal,n_det,n_gt,threshold\n" +
                     format_number(r.precision) + "," + format_number(r.recall) + "," +
                     format_number(r.f1_standard) + "," + format_number(r.f1_paper_literal) + "," +
                     std::to_string(r.n_detections) + "," + std::to_string(r.n_truth) + "," +
                     format_number(r.threshold) + "\n");
}

struct SynthArgs {
  SceneSpec scene;
  std::string output;
};

void run_synth(const SynthArgs& a) {
  const CenterSet labels = generate_scene(a.scene);
  write_centers_csv(a.output, labels);
  const SceneSpec& s = a.scene;
  KeyValues m = run_header("synth");
  m.insert(m.end(), {{"output", a.output},
                     {"height", std::to_string(s.height)},
                     {"width", std::to_string(s.width)},
                     {"n_cells", std::to_string(s.n_cells)},
                     {"min_spacing", format_number(s.min_spacing)},
                     {"crowded_fraction", format_number(s.crowded_fraction)},
                     {"cell_radius", format_number(s.cell_radius)},
                     {"seed", std::to_string(s.seed)},
                     {"rng", "mt19937_64"}});
  write_manifest(sidecar(a.output), m);
}

struct PerturbArgs {
  std::string input, output;
  PerturbSpec spec;
};

void run_perturb(const PerturbArgs& a) {
  write_sfld(a.output, perturb(read_sfld(a.input), a.spec));
  KeyValues m = run_header("perturb");
  m.insert(m.end(), {{"input", a.input},
                     {"output", a.output},
                     {"blur_sigma", format_number(a.spec.blur_sigma)},
                     {"noise_sigma", format_number(a.spec.noise_sigma)},
                     {"seed", std::to_string(a.spec.seed)},
                     {"rng", "mt19937_64"}});
  write_manifest(sidecar(a.output), m);
}

void run_bench(const std::string& config_path, const std::string& out_dir) {
  const BenchConfig cfg = parse_bench_config(read_key_values(config_path));
  const BenchResult result = run_benchmark(cfg);
  write_bench_outputs(out_dir, cfg, result);
  write_bench_summary(std::cout, result.summary);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dot-label coding toolkit: encode, score, decode and evaluate cell-center maps"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* c_enc = app.add_subcommand("encode", "Encode a center CSV into an SFLD coding");
  c_enc->add_option("--scheme", enc.scheme, "dot|gaussian|rect|proximity|repel")
      ->check(CLI::IsMember({"dot", "gaussian", "rect", "rectangle", "proximity", "repel"}));
  c_enc->add_option("--alpha", enc.alpha, "Proximity/repel decay");
  c_enc->add_option("--radius", enc.radius, "Proximity/repel cutoff radius (px)");
  c_enc->add_option("--sigma", enc.sigma, "Gaussian sigma (px)");
  c_enc->add_option("--kernel-size", enc.kernel_size, "Box side (odd, px)");
  c_enc->add_option("--norm", enc.norm, "raw|peak_one|unit_mass")
      ->check(CLI::IsMember({"raw", "peak_one", "unit_mass"}));
  c_enc->add_option("--cell-radius", enc.cell_radius, "Average cell radius for default parameters")
      ->capture_default_str();
  c_enc->add_option("input", enc.input, "Center CSV")->required()->check(CLI::ExistingFile);
  c_enc->add_option("--height", enc.height)->required();
  c_enc->add_option("--width", enc.width)->required();
  c_enc->add_option("-o,--output", enc.output, "Output SFLD")->required();

  MetricsArgs met;
  auto* c_met = app.add_subcommand("metrics", "Entropy and reversibility of SFLD codings");
  c_met->add_option("inputs", met.inputs, "SFLD fields")->required()->check(CLI::ExistingFile);
  c_met->add_option("--labels", met.labels, "Ground-truth center CSV")
      ->required()
      ->check(CLI::ExistingFile);
  c_met->add_option("--bins", met.bins)->capture_default_str();
  c_met->add_option("--dilate", met.dilate, "Dilation disk diameter (px)")->capture_default_str();
  c_met->add_option("--scheme", met.scheme, "Scheme label for the output rows");
  c_met->add_option("-o,--output", met.output, "Output CSV (default stdout)");

  DecodeArgs dec;
  auto* c_dec = app.add_subcommand("decode", "Recover centers (or a count) from an SFLD field");
  c_dec->add_option("input", dec.input)->required()->check(CLI::ExistingFile);
  c_dec->add_option("-o,--output", dec.output, "Output CSV (default stdout)");
  c_dec->add_option("--nms-radius", dec.nms_radius)->capture_default_str();
  c_dec->add_option("--threshold", dec.threshold)->capture_default_str();
  c_dec->add_option("--threshold-mode", dec.mode)
      ->check(CLI::IsMember({"absolute", "relative_to_max"}))
      ->capture_default_str();
  c_dec->add_flag("--count", dec.count, "Emit the integration count instead of centers");

  EvalArgs ev;
  auto* c_ev = app.add_subcommand("eval", "Greedy-match detections against ground truth");
  c_ev->add_option("detections", ev.detections)->required()->check(CLI::ExistingFile);
  c_ev->add_option("truth", ev.truth)->required()->check(CLI::ExistingFile);
  auto* thr = c_ev->add_option("--threshold", ev.threshold, "Match distance threshold (px)");
  c_ev->add_option("--dataset", ev.dataset, "Use a dataset's average cell radius")
      ->check(CLI::IsMember({"dg", "adip", "hbm", "vgg"}))
      ->excludes(thr);
  c_ev->add_option("--height", ev.height);
  c_ev->add_option("--width", ev.width);
  c_ev->add_option("-o,--output", ev.output, "Output CSV (default stdout)");

  SynthArgs syn;
  auto* c_syn = app.add_subcommand("synth", "Generate a synthetic center CSV");
  c_syn->add_option("--height", syn.scene.height)->capture_default_str();
  c_syn->add_option("--width", syn.scene.width)->capture_default_str();
  c_syn->add_option("--n-cells", syn.scene.n_cells)->capture_default_str();
  c_syn->add_option("--min-spacing", syn.scene.min_spacing)->capture_default_str();
  c_syn->add_option("--crowded-fraction", syn.scene.crowded_fraction)->capture_default_str();
  c_syn->add_option("--cell-radius", syn.scene.cell_radius)->capture_default_str();
  c_syn->add_option("--seed", syn.scene.seed)->capture_default_str();
  c_syn->add_option("-o,--output", syn.output, "Output CSV")->required();

  PerturbArgs per;
  auto* c_per = app.add_subcommand("perturb", "Blur and add noise to an SFLD field");
  c_per->add_option("input", per.input)->required()->check(CLI::ExistingFile);
  c_per->add_option("-o,--output", per.output)->required();
  c_per->add_option("--blur-sigma", per.spec.blur_sigma)->capture_default_str();
  c_per->add_option("--noise-sigma", per.spec.noise_sigma)->capture_default_str();
  c_per->add_option("--seed", per.spec.seed)->capture_default_str();

  std::string bench_config, bench_dir;
  auto* c_bench = app.add_subcommand("bench", "Run an end-to-end benchmark sweep");
  c_bench->add_option("config", bench_config)->required()->check(CLI::ExistingFile);
  c_bench->add_option("-o,--output", bench_dir, "Output directory")->required();

  std::string png_in, png_out;
  auto* c_png = app.add_subcommand("export-png", "Export an SFLD field as 16-bit grayscale PNG");
  c_png->add_option("input", png_in)->required()->check(CLI::ExistingFile);
  c_png->add_option("-o,--output", png_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*c_enc) run_encode(enc);
    else if (*c_met) run_metrics(met);
    else if (*c_dec) run_decode(dec);
    else if (*c_ev) run_eval(ev);
    else if (*c_syn) run_synth(syn);
    else if (*c_per) run_perturb(per);
    else if (*c_bench) run_bench(bench_config, bench_dir);
    else if (*c_png) export_png16(png_out, read_sfld(png_in));
  } catch (const std::exception& e) {
    std::cerr << "repelcode: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
