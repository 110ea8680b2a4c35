#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "repelcode/io.hpp"
#include "repelcode/png_export.hpp"

using namespace repelcode;
namespace fs = std::filesystem;

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(-2.5), "-2.5");
  const double x = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(CentersCsv, RoundTrip) {
  std::mt19937_64 rng(1);
  const CenterSet labels = oracle::random_centers(rng, 50, 60, 20);
  std::stringstream ss;
  write_centers_csv(ss, labels);
  EXPECT_EQ(read_centers_csv(ss, 50, 60), labels);
}

TEST(CentersCsv, ToleratesBlankLinesAndSpaces) {
  std::istringstream in("row,col\n\n 3, 4\n10,0\n\n");
  const CenterSet labels = read_centers_csv(in, 20, 20);
  ASSERT_EQ(labels.size(), 2u);
  EXPECT_EQ(labels[0], (Pixel{3, 4}));
}

TEST(CentersCsv, Errors) {
  std::istringstream no_header("3,4\n");
  EXPECT_THROW(read_centers_csv(no_header, 10, 10), std::runtime_error);
  std::istringstream empty("");
  EXPECT_THROW(read_centers_csv(empty, 10, 10), std::runtime_error);
  std::istringstream garbage("row,col\n3,x\n");
  EXPECT_THROW(read_centers_csv(garbage, 10, 10), std::runtime_error);
  std::istringstream three("row,col\n1,2,3\n");
  EXPECT_THROW(read_centers_csv(three, 10, 10), std::runtime_error);
  std::istringstream outside("row,col\n10,2\n");
  EXPECT_THROW(read_centers_csv(outside, 10, 10), std::out_of_range);
}

TEST(Sfld, ByteLayout) {
  ScalarField f(1, 2, 0.0);
  f(0, 0) = 1.0;
  f(0, 1) = -2.0;
  std::ostringstream out;
  write_sfld(out, f);
  const std::string b = out.str();
  ASSERT_EQ(b.size(), 4u + 1u + 8u + 8u);
  EXPECT_EQ(b.substr(0, 4), "SFLD");
  EXPECT_EQ(b[4], '\x01');
  EXPECT_EQ(b.substr(5, 4), std::string("\x01\x00\x00\x00", 4));
  EXPECT_EQ(b.substr(9, 4), std::string("\x02\x00\x00\x00", 4));
  EXPECT_EQ(b.substr(13, 4), std::string("\x00\x00\x80\x3f", 4));  // 1.0f
  EXPECT_EQ(b.substr(17, 4), std::string("\x00\x00\x00\xc0", 4));  // -2.0f
}

TEST(Sfld, RoundTripIsFloat32Quantization) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScalarField f(13, 17);
  for (double& v : f.values()) v = u(rng);
  std::stringstream ss;
  write_sfld(ss, f);
  const ScalarField back = read_sfld(ss);
  EXPECT_EQ(back, quantize_f32(f));
  std::stringstream again;
  write_sfld(again, back);
  EXPECT_EQ(read_sfld(again), back);
}

TEST(Sfld, RejectsCorruptInput) {
  std::istringstream bad_magic(std::string("SFLX\x01", 5));
  EXPECT_THROW(read_sfld(bad_magic), std::runtime_error);
  std::istringstream bad_version(std::string("SFLD\x02\x01\0\0\0\x01\0\0\0", 13));
  EXPECT_THROW(read_sfld(bad_version), std::runtime_error);
  std::istringstream zero_dim(std::string("SFLD\x01\0\0\0\0\x01\0\0\0", 13));
  EXPECT_THROW(read_sfld(zero_dim), std::runtime_error);
  std::istringstream truncated(std::string("SFLD\x01\x02\0\0\0\x02\0\0\0\0\0\x80\x3f", 17));
  EXPECT_THROW(read_sfld(truncated), std::runtime_error);
}

TEST(KeyValues, SectionsAndComments) {
  std::istringstream in(
      "# top comment\n"
      "name = value  # trailing\n"
      "[scene]\n"
      "height = 64\n"
      "  [ coding ]  \n"
      "schemes = dot, repel\n");
  const KeyValues kv = read_key_values(in);
  ASSERT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv[0], (std::pair<std::string, std::string>{"name", "value"}));
  EXPECT_EQ(kv[1], (std::pair<std::string, std::string>{"scene.height", "64"}));
  EXPECT_EQ(kv[2], (std::pair<std::string, std::string>{"coding.schemes", "dot, repel"}));
}

TEST(KeyValues, ManifestRoundTrip) {
  const KeyValues kv{{"scheme", "repel"}, {"alpha", "0.8"}};
  std::stringstream ss;
  write_manifest(ss, kv);
  EXPECT_EQ(read_key_values(ss), kv);
}

TEST(KeyValues, Errors) {
  std::istringstream no_eq("just words\n");
  EXPECT_THROW(read_key_values(no_eq), std::runtime_error);
  std::istringstream bad_section("[open\n");
  EXPECT_THROW(read_key_values(bad_section), std::runtime_error);
}

TEST(Png, Gray16MappingAndFileSignature) {
  ScalarField f(3, 4, 0.0);
  f(1, 2) = 2.0;
  f(2, 3) = 1.0;
  const auto g = to_gray16(f);
  EXPECT_EQ(g[1 * 4 + 2], 65535);
  EXPECT_EQ(g[2 * 4 + 3], 32768);
  EXPECT_EQ(g[0], 0);

  const fs::path path = fs::temp_directory_path() / "repelcode_test_export.png";
  export_png16(path.string(), f);
  std::ifstream in(path, std::ios::binary);
  std::string sig(8, '\0');
  in.read(sig.data(), 8);
  EXPECT_EQ(sig, std::string("\x89PNG\r\n\x1a\n", 8));
  in.close();
  fs::remove(path);
  EXPECT_THROW(export_png16("/nonexistent-dir/x.png", f), std::runtime_error);
}
