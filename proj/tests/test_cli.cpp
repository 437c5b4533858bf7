#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "curbs/eval.hpp"
#include "curbs/io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("curbs_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(CURBS_CLI_PATH) + " " + args + " > " +
                            (dir_ / "stdout.txt").string() + " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
  }

  fs::path dir_;
};

TEST_F(CliTest, ClusterWritesJson) {
  write("in.csv", "0,0,0\n0.1,0,0.1\n0,0.1,0\n5,5,5\n5.1,5,5\n5,5.1,5.2\n");
  ASSERT_EQ(run("cluster --input " + path("in.csv") + " --output " + path("out.json")), 0);
  const auto j = nlohmann::json::parse(slurp(path("out.json")));
  EXPECT_TRUE(j.contains("k"));
  EXPECT_EQ(j.at("labels").size(), 6u);
}

TEST_F(CliTest, RaggedCsvIsFormatError) {
  write("in.csv", "1,2,3\n4,5\n");
  EXPECT_EQ(run("cluster --input " + path("in.csv")), 2);
  EXPECT_EQ(run("cluster --input " + path("missing.csv")), 2);
}

TEST_F(CliTest, IdenticalCurvesAreDegenerate) {
  write("in.csv", "1,2,3\n1,2,3\n1,2,3\n");
  EXPECT_EQ(run("cluster --input " + path("in.csv")), 3);
}

TEST_F(CliTest, ClusterKRange) {
  write("in.csv", "0,0\n1,1\n2,2.5\n7,7\n8,8.5\n");
  ASSERT_EQ(run("cluster-k --k 2 --input " + path("in.csv") + " --output " + path("two.json")), 0);
  const auto two = nlohmann::json::parse(slurp(path("two.json")));
  std::set<int> distinct;
  for (int l : two.at("labels").get<std::vector<int>>()) distinct.insert(l);
  EXPECT_EQ(distinct, (std::set<int>{0, 1}));

  ASSERT_EQ(run("cluster-k --k 4 --input " + path("in.csv") + " --output " + path("four.json")), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(path("four.json"))).at("k").get<int>(), 4);

  EXPECT_EQ(run("cluster-k --k 6 --input " + path("in.csv")), 4);
  EXPECT_EQ(run("cluster-k --k 1 --input " + path("in.csv")), 4);
}

TEST_F(CliTest, SimulateShape) {
  ASSERT_EQ(run("simulate --model 5b --sizes 30,30,30 --seed 3 --output " + path("sim.csv")), 0);
  std::ifstream in(path("sim.csv"));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ',') + 1, 128);
  }
  EXPECT_EQ(rows, 90u);
  EXPECT_EQ(curbs::io::read_labels(fs::path(path("sim.csv.labels"))).size(), 90u);
}

TEST_F(CliTest, UnknownModelAndBadReps) {
  EXPECT_EQ(run("simulate --model 42 --sizes 3,3"), 4);
  EXPECT_EQ(run("bench --model 2a --sizes 5,5 --reps 0"), 4);
  EXPECT_EQ(run("bench --model nope --sizes 5,5 --reps 1"), 4);
  EXPECT_EQ(run("cluster"), 4);
}

TEST_F(CliTest, SimulateThenClusterDeterministicRoundTrip) {
  ASSERT_EQ(run("simulate --model 2a --sizes 30,30 --output " + path("sim.csv")), 0);
  const std::string cmd = "cluster --input " + path("sim.csv") + " --labels " +
                          path("sim.csv.labels") + " --output ";
  ASSERT_EQ(run(cmd + path("a.json")), 0);
  ASSERT_EQ(run(cmd + path("b.json")), 0);
  const std::string a = slurp(path("a.json"));
  EXPECT_EQ(a, slurp(path("b.json")));

  const auto j = nlohmann::json::parse(a);
  const auto labels = j.at("labels").get<std::vector<int>>();
  const auto truth = curbs::io::read_labels(fs::path(path("sim.csv.labels")));
  EXPECT_EQ(curbs::eval::rand_index(labels, truth), j.at("rand_index").get<double>());
}

TEST_F(CliTest, SimulatedShiftedPairFindsTwoClusters) {
  ASSERT_EQ(run("simulate --model 2a --sizes 30,30 --output " + path("sim.csv")), 0);
  ASSERT_EQ(run("cluster --input " + path("sim.csv") + " --output " + path("a.json")), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(path("a.json"))).at("k").get<int>(), 2);
}

TEST_F(CliTest, BenchReports) {
  ASSERT_EQ(run("bench --model 5b --sizes 6,6,6 --reps 2 --method curbs2 --k 3 --grid-points 32 --output " +
                path("r.json") + " --csv " + path("r.csv")),
            0);
  const auto j = nlohmann::json::parse(slurp(path("r.json")));
  EXPECT_EQ(j.at("reps").get<int>(), 2);
  EXPECT_NE(slurp(path("r.csv")).find("khat_equal"), std::string::npos);
}

TEST_F(CliTest, OracleCheckReportsVEqualsR) {
  ASSERT_EQ(run("oracle-check --model 2a --sizes 40,60 --doublings 6 --grid-points 64 --output " +
                path("oc")),
            0);
  const auto j = nlohmann::json::parse(slurp(path("oc/oracle_report.json")));
  EXPECT_TRUE(j.at("single_cluster_check").at("v_equals_r").get<bool>());
  EXPECT_TRUE(j.at("all_pass").get<bool>());
  EXPECT_NE(slurp(path("oc/curves.csv")).find("r,dw,dw_star,closed_form"), std::string::npos);
}

}  // namespace
