#include "graev/cli.hpp"
#include "graev/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
    graev::io::Json json() const { return graev::io::Json::parse(out); }
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "graev");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = graev::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    fs::path dir;

    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("graev-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir);
        write("line.json", R"({"kind":"euclidean","labels":["e","a","b","c"],"coords":[[0],[1],[2],[4]]})");
        write("tri.json", R"({"kind":"matrix","dist":[[0,1,3],[1,0,1],[3,1,0]]})");
        write("shrink.json", R"({"metrics":[{"ground_scale":1},{"ground_scale":0.5},{"ground_scale":0.3333333333}]})");
        write("const.json", R"({"metrics":[{"ground_scale":1}],"tail":"repeat-last"})");
        write("small.json", R"({"metrics":[{"ground_scale":0.1}]})");
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }
    void write(const std::string& name, const std::string& text) const { std::ofstream(dir / name) << text; }
};

} // namespace

TEST_F(Cli, Norm) {
    const auto r = run({"norm", "--space", path("line.json"), "--element", "1,2,3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.json().dump(), R"({"value":3.0,"witness":[[0,1],[2,3]]})");
}

TEST_F(Cli, ValidateMetric) {
    const auto bad = run({"validate-metric", "--space", path("tri.json")});
    EXPECT_EQ(bad.code, 1);
    EXPECT_EQ(bad.json()["violations"][0]["indices"].dump(), "[0,1,2]");
    EXPECT_EQ(run({"validate-metric", "--space", path("line.json")}).code, 0);
}

TEST_F(Cli, DistAndBall) {
    const auto d = run({"dist", "--space", path("line.json"), "--g", "1,2", "--h", "3"});
    ASSERT_EQ(d.code, 0) << d.err;
    EXPECT_EQ(d.json()["value"], 3.0);
    EXPECT_EQ(run({"ball", "--space", path("line.json"), "--element", "1,2,3", "--radius", "3"}).json()["member"], false);
    EXPECT_EQ(run({"ball", "--space", path("line.json"), "--element", "1,2,3", "--radius", "3.0001"}).json()["member"],
              true);
}

TEST_F(Cli, OracleCheck) {
    const auto r = run({"oracle-check", "--space", path("line.json"), "--max-support", "3", "--trials", "50", "--seed", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.json()["mismatches"].empty());
    EXPECT_LE(r.json()["max_abs_err"].get<double>(), 1e-9);
}

TEST_F(Cli, WdCheckAndWitness) {
    const auto cert = run({"wd-check", "--space", path("line.json"), "--metrics", path("shrink.json"), "--element", "2,3",
                           "--nmax", "8"});
    ASSERT_EQ(cert.code, 0) << cert.err;
    EXPECT_EQ(cert.json()["verdict"], "certified");
    EXPECT_TRUE(cert.json().contains("witness"));

    const auto ref = run({"wd-check", "--space", path("line.json"), "--metrics", path("const.json"), "--element", "1,3",
                          "--nmax", "6"});
    EXPECT_EQ(ref.json()["verdict"], "refuted");
    EXPECT_FALSE(ref.json().contains("witness"));

    const auto w = run({"wd-witness", "--space", path("line.json"), "--metrics", path("small.json"), "--element", "1,2"});
    ASSERT_EQ(w.code, 0) << w.err;
    EXPECT_EQ(w.json()["witness"].size(), 1u);

    const auto pre = run({"wd-witness", "--space", path("line.json"), "--metrics", path("const.json"), "--element", "1,3"});
    EXPECT_EQ(pre.code, 1);
    EXPECT_NE(pre.err.find("ball"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"norm", "--space", path("line.json")}).code, 2);
    EXPECT_EQ(run({"norm", "--space", path("missing.json"), "--element", "1"}).code, 2);
    EXPECT_EQ(run({"norm", "--space", path("line.json"), "--element", "9"}).code, 2);
    EXPECT_EQ(run({"cauchy-lab", "--scenario", "spiral"}).code, 2);
    EXPECT_EQ(run({"norm", "--help"}).code, 0);
}

TEST_F(Cli, CauchyLabWritesReport) {
    const auto out = path("lab.json");
    const auto r = run({"cauchy-lab", "--scenario", "all", "--seed", "42", "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto report = graev::io::read_json_file(out);
    EXPECT_EQ(report["mismatches"], 0);
    EXPECT_EQ(report["scenarios"].size(), 44u);
    for (const auto& s : report["scenarios"]) {
        EXPECT_TRUE(s.contains("label"));
        EXPECT_TRUE(s.contains("verdict"));
        EXPECT_TRUE(s.contains("modulus"));
    }
}

TEST_F(Cli, QuickSuiteIsDeterministic) {
    const auto a = run({"suite", "--seed", "1", "--quick"});
    const auto b = run({"suite", "--seed", "1", "--quick"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.json()["criteria"].size(), 9u);
    EXPECT_NE(run({"suite", "--seed", "2", "--quick"}).out, a.out);
}
