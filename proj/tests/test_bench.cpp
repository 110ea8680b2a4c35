#include <gtest/gtest.h>

#include <sstream>

#include "repelcode/bench.hpp"

using namespace repelcode;

namespace {

BenchConfig parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_bench_config(read_key_values(in));
}

const char* kSmallConfig =
    "[scene]\n"
    "height = 64\nwidth = 64\nn_cells = 8\ncell_radius = 5\nmin_spacing = 5\n"
    "crowded_fraction = 0\nseeds = 3, 1, 2, 1\n"
    "[coding]\nschemes = dot, gaussian, repel\n"
    "[perturb]\nblur_sigma = 0\nnoise_sigma = 0\n";

}  // namespace

TEST(BenchConfig, DerivesDefaultsFromCellRadius) {
  const BenchConfig cfg = parse_text(kSmallConfig);
  EXPECT_EQ(cfg.scene_seeds, (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(cfg.coding.radius_cutoff, 10.0);
  EXPECT_EQ(cfg.coding.sigma, 2.5);
  EXPECT_EQ(cfg.coding.kernel_size, 11);
  EXPECT_EQ(cfg.decode.nms_radius, 5.0);
  EXPECT_EQ(cfg.match_threshold, 5.0);
  EXPECT_EQ(cfg.schemes.size(), 3u);
}

TEST(BenchConfig, ManifestReparsesToSameConfig) {
  const BenchConfig cfg = parse_text(kSmallConfig);
  const std::string manifest = bench_manifest(cfg);
  const BenchConfig again = parse_text(manifest);
  EXPECT_EQ(bench_manifest(again), manifest);
}

TEST(BenchConfig, RejectsUnknownAndDuplicateKeys) {
  EXPECT_THROW(parse_text("[scene]\nheigth = 10\n"), std::invalid_argument);
  EXPECT_THROW(parse_text("[scene]\nheight = 10\nheight = 12\n"), std::invalid_argument);
  EXPECT_THROW(parse_text("[eval]\ndataset = nope\n"), std::invalid_argument);
  EXPECT_THROW(parse_text("[coding]\nalpha = fast\n"), std::invalid_argument);
  EXPECT_THROW(parse_text("[coding]\nschemes = dot, watershed\n"), std::invalid_argument);
}

TEST(BenchConfig, DefaultPerturbationSweep) {
  const BenchConfig cfg = parse_text("");
  EXPECT_EQ(cfg.blur_sigmas, (std::vector<double>{0.5, 1.0, 2.0}));
  EXPECT_EQ(cfg.noise_sigmas, (std::vector<double>{0.01, 0.05}));
  EXPECT_EQ(cfg.scene_seeds.size(), 5u);
}

TEST(BenchConfig, DatasetSetsMatchThreshold) {
  EXPECT_EQ(parse_text("[eval]\ndataset = hbm\n").match_threshold, 15.0);
}

TEST(RunBenchmark, SparseCleanSceneIsPerfect) {
  const BenchConfig cfg = parse_text(kSmallConfig);
  const BenchResult res = run_benchmark(cfg);
  ASSERT_EQ(res.rows.size(), 9u);
  for (const BenchRow& row : res.rows) {
    EXPECT_EQ(row.match.f1_standard, 1.0) << to_string(row.scheme) << " seed " << row.scene_seed;
    if (row.scheme == Scheme::dot) {
      EXPECT_EQ(row.quality.entropy_bits, 0.0);
      EXPECT_EQ(row.quality.reversibility, 1.0);
      EXPECT_EQ(row.count, 8.0);
    }
  }
  ASSERT_EQ(res.summary.size(), 3u);
  for (const BenchSummary& s : res.summary) {
    EXPECT_EQ(s.cells, 3u);
    EXPECT_EQ(s.f1_mean, 1.0);
    EXPECT_EQ(s.f1_std, 0.0);
  }
}

TEST(RunBenchmark, CanonicalRowOrder) {
  BenchConfig cfg = parse_text(kSmallConfig);
  cfg.blur_sigmas = {0.0, 1.0};
  const BenchResult res = run_benchmark(cfg);
  ASSERT_EQ(res.rows.size(), 18u);
  EXPECT_EQ(res.rows[0].scene_seed, 1u);
  EXPECT_EQ(res.rows[2].scheme, Scheme::repel);
  EXPECT_EQ(res.rows[3].blur_sigma, 1.0);
  EXPECT_EQ(res.rows[6].scene_seed, 2u);
  EXPECT_EQ(res.rows[6].perturb_seed, cfg.cell_perturb_seed(2));
}

TEST(RunBenchmark, OutputIsDeterministic) {
  BenchConfig cfg = parse_text(kSmallConfig);
  cfg.noise_sigmas = {0.02};
  cfg.blur_sigmas = {1.0};
  auto render = [&] {
    const BenchResult res = run_benchmark(cfg);
    std::ostringstream out;
    write_bench_rows(out, res.rows);
    write_bench_summary(out, res.summary);
    return out.str();
  };
  EXPECT_EQ(render(), render());
}

TEST(RunBenchmark, FailingCellNamesItsCoordinates) {
  BenchConfig cfg = parse_text(kSmallConfig);
  cfg.scene.height = cfg.scene.width = 8;
  cfg.scene.n_cells = 30;
  try {
    run_benchmark(cfg);
    FAIL() << "expected runtime_error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("scene_seed=1"), std::string::npos);
  }
}
