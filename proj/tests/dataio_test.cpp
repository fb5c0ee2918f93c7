#include "gridcodec/dataio.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

namespace gridcodec {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("gridcodec_test_" + std::to_string(::getpid()) + "_" +
                                                 std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string ausgrid_row(const std::string& customer, const std::string& category, const std::string& date,
                        int intervals, double base) {
  std::ostringstream row;
  row << customer << ",3.78,2076," << category << "," << date;
  for (int k = 0; k < intervals; ++k) row << "," << base + 0.001 * k;
  return row.str();
}

std::string ausgrid_header(bool with_quality) {
  std::ostringstream h;
  h << "Customer,Generator Capacity,Postcode,Consumption Category,date";
  for (int k = 1; k <= 48; ++k) h << "," << (k / 2) % 24 << ":" << (k % 2 ? "30" : "00");
  if (with_quality) h << ",Row Quality";
  return h.str();
}

TEST(LoadAusgrid, ParsesToyFile) {
  TempDir dir;
  const auto path = dir / "toy.csv";
  write_text(path, "\"Solar home half-hour data - 1 July 2012 to 30 June 2013\",,,\n" + ausgrid_header(true) + "\n" +
                       ausgrid_row("1", "GC", "1/07/2012", 48, 0.1) + ",\n" +
                       ausgrid_row("1", "CL", "1/07/2012", 48, 2.0) + ",\n" +
                       ausgrid_row("2", "GC", "1/07/2012", 48, 5.0) + ",\n" +
                       ausgrid_row("1", "GC", "2/07/2012", 48, 0.2) + ",\n");

  const auto one = load_ausgrid(path, std::string("1"));
  EXPECT_EQ(one.size(), 2);
  EXPECT_EQ(one.dim, 48);
  EXPECT_DOUBLE_EQ(one.profiles[0][0], 0.1);
  EXPECT_DOUBLE_EQ(one.profiles[1][47], 0.2 + 0.047);
  EXPECT_EQ(one.metadata.at("first_date"), "1/07/2012");
  EXPECT_EQ(one.metadata.at("last_date"), "2/07/2012");

  EXPECT_EQ(load_ausgrid(path, std::nullopt).size(), 3);
  EXPECT_EQ(load_ausgrid(path, std::string("1"), "CL").size(), 1);
}

TEST(LoadAusgrid, ShortRowNamesTheLine) {
  TempDir dir;
  const auto path = dir / "short.csv";
  write_text(path, ausgrid_header(false) + "\n" + ausgrid_row("1", "GC", "1/07/2012", 48, 0.1) + "\n" +
                       ausgrid_row("1", "GC", "2/07/2012", 47, 0.1) + "\n");
  try {
    load_ausgrid(path, std::string("1"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("short.csv:3"), std::string::npos) << e.what();
  }
}

TEST(LoadAusgrid, EmptySelection) {
  TempDir dir;
  const auto path = dir / "toy.csv";
  write_text(path, ausgrid_header(false) + "\n" + ausgrid_row("1", "GC", "1/07/2012", 48, 0.1) + "\n");
  try {
    load_ausgrid(path, std::string("99"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySelection);
  }
}

TEST(SynthGenerate, DeterministicAndNonNegative) {
  const auto a = synth_generate(5, 30, 12);
  const auto b = synth_generate(5, 30, 12);
  ASSERT_EQ(a.size(), 30);
  for (int i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.profiles[i], b.profiles[i]);
    EXPECT_GE(a.profiles[i].minCoeff(), 0.0);
  }
  EXPECT_NE(a.profiles[0], synth_generate(6, 30, 12).profiles[0]);

  const auto flat = synth_generate(5, 4, 6, SynthParams{0, 3.0, 0.0});
  for (const auto& p : flat.profiles) EXPECT_TRUE(p.isZero());
}

TEST(DatasetCsv, RoundTripsBitExactly) {
  testing::Rng rng(17);
  ProfileDataset d;
  d.dim = 7;
  for (int i = 0; i < 25; ++i) d.profiles.push_back(rng.vector(7, -1e3, 1e3) * rng.uniform(1e-9, 1e9));
  d.profiles.push_back(Vector::Constant(7, 0.1));

  TempDir dir;
  save_dataset(dir / "d.csv", d);
  const auto back = load_dataset(dir / "d.csv");
  ASSERT_EQ(back.size(), d.size());
  for (int i = 0; i < d.size(); ++i) EXPECT_EQ(back.profiles[i], d.profiles[i]);

  // And once more through the file: identical bytes.
  save_dataset(dir / "e.csv", back);
  EXPECT_EQ(read_text(dir / "d.csv"), read_text(dir / "e.csv"));
}

TEST(DatasetCsv, RejectsRaggedRows) {
  try {
    dataset_from_csv("1,2,3\n4,5\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
}

TEST(CodecJson, RoundTripBothKinds) {
  testing::Rng rng(3);
  const Codec linear = LinearCodec{rng.matrix(2, 5, -1, 1)};
  const Codec ae = ae_init(5, 3, 9, 0.7);
  for (const Codec& codec : {linear, ae}) {
    const auto json = codec_to_json(codec);
    EXPECT_EQ(json["kind"], codec_kind(codec));
    const Codec back = codec_from_json(nlohmann::json::parse(json.dump()));
    EXPECT_EQ(back.index(), codec.index());
    EXPECT_EQ(codec_to_json(back), json);
  }
  EXPECT_EQ(codec_to_json(linear)["N"], 2);
  EXPECT_EQ(codec_to_json(ae)["W1"].size(), 3u);
  EXPECT_EQ(codec_to_json(ae)["W1"][0].size(), 6u);
}

TEST(CodecJson, RejectsMalformed) {
  EXPECT_THROW(codec_from_json(nlohmann::json{{"kind", "wavelet"}, {"N", 1}, {"P", 2}}), Error);
  EXPECT_THROW(codec_from_json(nlohmann::json{{"kind", "linear"}, {"N", 1}, {"P", 2}, {"B", {{1.0}}}}), Error);
  EXPECT_THROW(codec_from_json(nlohmann::json{{"kind", "linear"}, {"N", 3}, {"P", 2}}), Error);
}

}  // namespace
}  // namespace gridcodec
