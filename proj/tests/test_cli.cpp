#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "test_helpers.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Result {
  int status = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("oblix_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return p.string();
  }

  std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  Result run(const std::string& args, const std::string& env = "") {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = env + " " + OBLIX_CLI_PATH + " " + args + " >" + out.string() + " 2>" + err.string();
    const int raw = std::system(cmd.c_str());
    Result r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path dir_;
};

const char* kLine = R"({"rows": 2, "cols": 1, "entries": [[1, 0], [1, 0]]})";
const char* kE1 = R"({"rows": 2, "cols": 1, "entries": [1, 0]})";

TEST_F(Cli, Angles) {
  const Result r = run("angles --m " + file("m.json", kE1) + " --n " + file("n.json", kLine));
  ASSERT_EQ(r.status, 0) << r.err;
  ASSERT_FALSE(r.out.empty());
  EXPECT_EQ(r.out.back(), '\n');
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["friedrichs_cos"].get<double>(), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(j["dixmier_cos"].get<double>(), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_EQ(j["intersection_dim"].get<int>(), 0);
  // (1,1) is not unit length: the loader fixes it and says so.
  EXPECT_NE(r.err.find("re-orthonormalized"), std::string::npos);
}

TEST_F(Cli, ProjectExample) {
  const Result r = run("project --a " + file("a.json", kLine) + " --weights " + file("w.csv", "1\n2\n"));
  ASSERT_EQ(r.status, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["norm"].get<double>(), std::sqrt(10.0) / 3.0, 1e-14);
  EXPECT_NEAR(j["ljance_ptak_norm"].get<double>(), std::sqrt(10.0) / 3.0, 1e-14);
  EXPECT_NEAR(j["entries"][1][0].get<double>(), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(j["method"], "qr");
}

TEST_F(Cli, ProjectSemidefiniteAndComplex) {
  const Result semi = run("project --a " + file("a.json", kLine) + " --weights " + file("w.csv", "1,0\n"));
  ASSERT_EQ(semi.status, 0) << semi.err;
  EXPECT_NEAR(json::parse(semi.out)["norm"].get<double>(), std::sqrt(2.0), 1e-14);

  const std::string w = file("wc.json", R"({"rows": 2, "cols": 1, "entries": [[1, 0.5], [2, -1]]})");
  EXPECT_EQ(run("project --a " + file("a2.json", kLine) + " --weights " + w).status, 1);
  const Result cone = run("project --mu 0.5 --a " + file("a3.json", kLine) + " --weights " + w);
  ASSERT_EQ(cone.status, 0) << cone.err;
  EXPECT_EQ(json::parse(cone.out)["method"], "gram");
}

TEST_F(Cli, Hull) {
  const Result r = run("hull --a " + file("a.json", kLine) + " --weights " + file("w.csv", "1,2\n"));
  ASSERT_EQ(r.status, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["members"].get<int>(), 2);
  EXPECT_NEAR(j["weights"][0].get<double>(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(j["weights"][1].get<double>(), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(j["index_sets"][1], "{1}");
}

TEST_F(Cli, BoundsReportFields) {
  const std::string s = file("s.json", kLine);
  const Result r = run("bounds --subspace " + s + " --samples 200 --seed 7");
  ASSERT_EQ(r.status, 0) << r.err;
  const json j = json::parse(r.out);
  for (const char* key : {"max_over_Q", "min_mI", "K", "sup_sampled", "samples", "seed", "witness_Q", "witness_I"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_NEAR(j["max_over_Q"].get<double>(), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(j["min_mI"].get<double>(), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_LE(j["sup_sampled"].get<double>(), std::sqrt(2.0) + 1e-8);
  EXPECT_EQ(j["seed"].get<int>(), 7);
  EXPECT_EQ(j["samples"].get<int>(), 200);
  EXPECT_EQ(j["witness_Q"], json::array({0}));
  for (const auto& [key, value] : j.items()) {
    if (value.is_array()) {
      for (const auto& v : value) EXPECT_FALSE(v.is_structured()) << key;
    } else {
      EXPECT_FALSE(value.is_object()) << key;
    }
  }
}

TEST_F(Cli, BoundsAreDeterministic) {
  const std::string s = file("s.json", R"({"rows": 4, "cols": 2, "entries": [1, 0, 2, 1, 0, 3, 1, 1]})");
  const std::string a = (dir_ / "a.json").string();
  const std::string b = (dir_ / "b.json").string();
  ASSERT_EQ(run("bounds --subspace " + s + " --samples 300 --seed 11 --out " + a).status, 0);
  ASSERT_EQ(run("bounds --subspace " + s + " --samples 300 --seed 11 --out " + b).status, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
}

TEST_F(Cli, SeedRequiredWithSamples) {
  const Result r = run("bounds --subspace " + file("s.json", kLine) + " --samples 10");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("--seed"), std::string::npos);
  EXPECT_EQ(run("bounds --subspace " + file("t.json", kLine)).status, 0);
}

TEST_F(Cli, ValidationErrorsExitOne) {
  EXPECT_EQ(run("angles --m " + file("m.csv", "1\nnan\n") + " --n " + file("n.json", kE1)).status, 1);
  EXPECT_EQ(run("angles --m /does/not/exist --n " + file("n2.json", kE1)).status, 1);
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("bogus").status, 1);
  const Result nan = run("angles --m " + file("m2.csv", "1\nnan\n") + " --n " + file("n3.json", kE1));
  EXPECT_NE(nan.err.find("ParseError"), std::string::npos) << nan.err;
}

TEST_F(Cli, EnumerationCapFromEnvironment) {
  const std::string s = file("s.csv", "1\n1\n1\n1\n1\n");
  EXPECT_EQ(run("bounds --subspace " + s, "OBLIX_ENUM_CAP=16").status, 1);
  EXPECT_EQ(run("bounds --subspace " + s, "OBLIX_ENUM_CAP=32").status, 0);
}

TEST_F(Cli, Duality) {
  const std::string a = file("a.json", R"({"rows": 3, "cols": 1, "entries": [1, 2, 3]})");
  const Result r = run("duality --a " + a + " --mu 1 --samples 100 --seed 5");
  ASSERT_EQ(r.status, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["failures"].get<int>(), 0);
  EXPECT_LE(j["max_discrepancy"].get<double>(), 1e-7);
  EXPECT_EQ(run("duality --a " + a + " --mu 1 --samples 100").status, 1);
}

TEST_F(Cli, FramesFromMatrixAndGenerator) {
  const double h = std::sqrt(3.0) / 2.0;
  const std::string mb = file("mb.json", R"({"rows": 2, "cols": 3, "entries": [1, -0.5, -0.5, 0, )" +
                                             std::to_string(h) + ", " + std::to_string(-h) + "]}");
  const Result r = run("frames --frame " + mb);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["riesz_constant"].get<double>(), 0.5, 1e-6);

  const std::string gen = file("g.json", R"({"kind": "nullspace_tail", "rule": "geometric", "ratio": 0.5, "dim": 4})");
  const Result g = run("frames --frame " + gen);
  ASSERT_EQ(g.status, 0) << g.err;
  const json j = json::parse(g.out);
  EXPECT_EQ(j["size"].get<int>(), 4);
  EXPECT_EQ(j["dim"].get<int>(), 3);
  EXPECT_NEAR(j["riesz_constant"].get<double>(), 0.011764705882352941, 1e-12);
  EXPECT_EQ(run("frames --frame " + file("bad.json", R"({"kind": "other", "dim": 3})")).status, 1);
}

TEST_F(Cli, ExperimentCurves) {
  const Result t = run("experiment --kind truncation --rule geometric --ratio 0.5 --dims 2..8");
  ASSERT_EQ(t.status, 0) << t.err;
  std::istringstream lines(t.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "m,K,min_mI");
  int count = 0;
  while (std::getline(lines, line)) ++count;
  EXPECT_EQ(count, 7);

  const Result rz = run("experiment --kind riesz --rule finite --coefficients 1,0.5 --dims 2,3,4");
  ASSERT_EQ(rz.status, 0) << rz.err;
  EXPECT_EQ(rz.out.substr(0, rz.out.find('\n')), "m,riesz_constant,max_cos,K");
  EXPECT_EQ(run("experiment --kind riesz --dims 1..3").status, 1);
  EXPECT_EQ(run("experiment --kind truncation --dims 5..2").status, 1);
}

}  // namespace
