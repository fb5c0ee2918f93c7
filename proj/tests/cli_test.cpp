#include "gridcodec/cli.hpp"

#include "gridcodec/dataio.hpp"
#include "gridcodec/evaluate.hpp"

#include <gtest/gtest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

namespace gridcodec {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("gridcodec_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "gridcodec");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, SynthIsDeterministic) {
  ASSERT_EQ(run({"synth", "--seed", "1", "--t", "64", "--p", "16", "--out", path("a.csv")}), 0);
  ASSERT_EQ(run({"synth", "--seed", "1", "--t", "64", "--p", "16", "--out", path("b.csv")}), 0);
  EXPECT_EQ(read_text(path("a.csv")), read_text(path("b.csv")));
  EXPECT_EQ(load_dataset(path("a.csv")).size(), 64);
}

TEST_F(CliTest, RankTooLargeFails) {
  ASSERT_EQ(run({"synth", "--seed", "1", "--t", "64", "--p", "16", "--out", path("d.csv")}), 0);
  EXPECT_NE(run({"train", "--codec", "klt", "--dataset", path("d.csv"), "--n", "17", "--p", "inf", "--out",
                 path("k.json")}),
            0);
  const std::string diagnostic = err_.str();
  EXPECT_NE(diagnostic.find("RankTooLarge"), std::string::npos) << diagnostic;
  EXPECT_EQ(std::count(diagnostic.begin(), diagnostic.end(), '\n'), 1);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_NE(run({}), 0);
  EXPECT_NE(run({"train", "--codec", "wavelet", "--dataset", "x", "--out", "y"}), 0);
  EXPECT_NE(run({"eval", "--dataset", "x", "--out", "y"}), 0);
  EXPECT_FALSE(err_.str().empty());
  EXPECT_NE(run({"train", "--dataset", path("missing.csv"), "--out", path("k.json")}), 0);
  EXPECT_NE(err_.str().find("IoError"), std::string::npos);
}

TEST_F(CliTest, FullPipelineLinearBeatsKlt) {
  ASSERT_EQ(run({"synth", "--seed", "3", "--t", "64", "--p", "8", "--out", path("d.csv")}), 0);
  const std::vector<std::string> task{"--n", "2", "--p", "20", "--e", "5"};
  auto with_task = [&](std::vector<std::string> args) {
    args.insert(args.end(), task.begin(), task.end());
    return args;
  };
  ASSERT_EQ(run(with_task({"train", "--codec", "klt", "--dataset", path("d.csv"), "--out", path("klt.json")})), 0);
  ASSERT_EQ(run(with_task({"train", "--codec", "linear", "--dataset", path("d.csv"), "--out", path("linear.json")})),
            0);
  ASSERT_EQ(run(with_task({"train", "--codec", "ae", "--dataset", path("d.csv"), "--iters", "20", "--out",
                           path("ae.json")})),
            0);
  ASSERT_EQ(run({"eval", "--codec", path("klt.json") + "," + path("linear.json") + "," + path("ae.json"),
                 "--dataset", path("d.csv"), "--p", "20", "--e", "5", "--out", path("report.json"), "--csv",
                 path("report.csv")}),
            0)
      << err_.str();

  const auto report = nlohmann::json::parse(read_text(path("report.json")));
  EXPECT_NO_THROW(validate_report_json(report));
  ASSERT_EQ(report["codecs"].size(), 3u);
  EXPECT_EQ(report["codecs"][0]["name"], "klt");
  EXPECT_LE(report["codecs"][1]["mse_loss"].get<double>(), report["codecs"][0]["mse_loss"].get<double>());
  EXPECT_EQ(read_text(path("report.csv")).rfind("codec,bits,mse_loss,relative_percent\n", 0), 0u);

  ASSERT_EQ(run({"eval", "--codec", path("ae.json"), "--dataset", path("d.csv"), "--p", "20", "--e", "5", "--bits",
                 "4", "--out", path("q.json")}),
            0);
  const auto quantized = nlohmann::json::parse(read_text(path("q.json")));
  EXPECT_EQ(quantized["codecs"][0]["quantizer"]["mode"], "unit");

  ASSERT_EQ(run({"sweep", "--codec", path("linear.json"), "--dataset", path("d.csv"), "--p", "20", "--e", "5",
                 "--bits", "1,2,3", "--holdout", "0.25", "--out", path("sweep.json")}),
            0);
  const auto sweep = nlohmann::json::parse(read_text(path("sweep.json")));
  EXPECT_NO_THROW(validate_report_json(sweep));
  EXPECT_EQ(sweep["codecs"][0]["curve"].size(), 3u);
}

TEST_F(CliTest, IngestAusgrid) {
  std::ostringstream csv;
  csv << "Customer,Generator Capacity,Postcode,Consumption Category,date";
  for (int k = 0; k < 48; ++k) csv << ",t" << k;
  csv << "\n";
  for (int day = 1; day <= 3; ++day) {
    csv << "7,1.5,2000,GC," << day << "/07/2012";
    for (int k = 0; k < 48; ++k) csv << "," << 0.01 * (k + day);
    csv << "\n";
  }
  write_text(path("ausgrid.csv"), csv.str());
  ASSERT_EQ(run({"ingest", "--ausgrid", path("ausgrid.csv"), "--customer", "7", "--out", path("d.csv")}), 0)
      << err_.str();
  const auto data = load_dataset(path("d.csv"));
  EXPECT_EQ(data.size(), 3);
  EXPECT_EQ(data.dim, 48);
  EXPECT_NE(run({"ingest", "--ausgrid", path("ausgrid.csv"), "--customer", "8", "--out", path("e.csv")}), 0);
  EXPECT_NE(err_.str().find("EmptySelection"), std::string::npos);
}

}  // namespace
}  // namespace gridcodec
