#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "rze/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "rze");
    std::ostringstream out;
    std::ostringstream err;
    const int status = rze::cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("rze_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

bool single_error_line(const std::string& err, const std::string& kind) {
    return err.rfind("error kind=" + kind + " message=\"", 0) == 0 && err.find('\n') == err.size() - 1;
}

}  // namespace

TEST_F(CliTest, SampleWritesConfiguration) {
    const auto r = run({"sample", "--window", "disk:6", "--seed", "3", "--out", path("c.json")});
    ASSERT_EQ(r.status, 0) << r.err;
    const auto file = rze::load_configuration(path("c.json"));
    const auto direct = rze::sample_poisson(rze::IntensityMeasure::lebesgue(1.0), rze::Window::disk(6.0), 3);
    EXPECT_EQ(std::get<rze::Configuration>(file.config), direct);
    EXPECT_EQ(file.intensity, "lebesgue:1");
    EXPECT_NE(r.out.find("points=" + std::to_string(direct.size())), std::string::npos);
}

TEST_F(CliTest, SampleRequiresSeed) {
    const auto r = run({"sample", "--window", "disk:6", "--out", path("c.json")});
    EXPECT_EQ(r.status, 2);
    EXPECT_TRUE(single_error_line(r.err, "validation")) << r.err;
    EXPECT_FALSE(fs::exists(path("c.json")));
}

TEST_F(CliTest, BadDescriptorsAreValidationErrors) {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"sample", "--window", "square:2", "--seed", "1"},
             {"sample", "--window", "disk:2", "--seed", "1", "--marks", "zeta:2"},
             {"sample", "--window", "disk:2", "--seed", "1", "--intensity", "lebesgue:-1"},
             {"campbell", "--check", "median", "--seed", "1"},
             {"frobnicate"},
         }) {
        const auto r = run(args);
        EXPECT_EQ(r.status, 2) << args.front();
        EXPECT_TRUE(single_error_line(r.err, "validation")) << r.err;
    }
}

TEST_F(CliTest, MissingInputIsIoError) {
    const auto r = run({"grid", "--input", path("missing.json"), "--radius", "1"});
    EXPECT_EQ(r.status, 3);
    EXPECT_TRUE(single_error_line(r.err, "io")) << r.err;
}

TEST_F(CliTest, GridCertifiedAndUncertified) {
    ASSERT_EQ(run({"sample", "--window", "disk:10", "--seed", "4", "--out", path("c.json")}).status, 0);
    const auto r = run({"grid", "--input", path("c.json"), "--radius", "2", "--grid", "-1:1:-1:1:5:3", "--out",
                        path("g.csv")});
    ASSERT_EQ(r.status, 0) << r.err;
    std::ifstream csv(path("g.csv"));
    std::string line;
    int lines = 0;
    while (std::getline(csv, line)) {
        ++lines;
    }
    EXPECT_EQ(lines, 16);
    const auto side = rze::Json::parse(rze::read_text_file(path("g.csv.json")));
    EXPECT_TRUE(side["certificate"].get<bool>());
    EXPECT_NEAR(side["tail_bound"]["expected_tail"].get<double>(),
                rze::tail_bound(rze::Genus{2}, 1.0, 2.0, 10.0, 0.95).expected_tail, 1e-15);

    const auto low = run({"grid", "--input", path("c.json"), "--radius", "2", "-p", "1", "--out", path("g1.csv")});
    EXPECT_EQ(low.status, 2);
    EXPECT_TRUE(single_error_line(low.err, "validation"));
    EXPECT_FALSE(fs::exists(path("g1.csv")));

    const auto open = run({"grid", "--input", path("c.json"), "--radius", "2", "-p", "1", "--no-certificate", "--grid",
                           "0:1:0:0:3:1", "--out", path("g2.csv")});
    EXPECT_EQ(open.status, 0) << open.err;
    const auto side2 = rze::Json::parse(rze::read_text_file(path("g2.csv.json")));
    EXPECT_TRUE(side2["tail_bound"].is_null());
}

TEST_F(CliTest, VerifyPassesAndDetectsTampering) {
    ASSERT_EQ(run({"sample", "--window", "disk:10", "--seed", "12", "--out", path("c.json")}).status, 0);
    const auto ok = run({"verify", "--input", path("c.json"), "--radius", "2", "--out", path("r.json")});
    EXPECT_EQ(ok.status, 0) << ok.err;
    EXPECT_TRUE(rze::Json::parse(rze::read_text_file(path("r.json")))["passed"].get<bool>());

    auto j = rze::Json::parse(rze::read_text_file(path("c.json")));
    ASSERT_FALSE(j["points"].empty());
    j["points"][0][0] = j["points"][0][0].get<double>() + 0.01;
    rze::write_text_file(path("t.json"), j.dump());
    const auto bad = run({"verify", "--input", path("t.json"), "--radius", "2", "--out", path("r2.json")});
    EXPECT_EQ(bad.status, 1);
    EXPECT_FALSE(rze::Json::parse(rze::read_text_file(path("r2.json")))["passed"].get<bool>());
}

TEST_F(CliTest, CampbellStatistics) {
    const auto r = run({"campbell", "--trials", "500", "--seed", "8", "--window", "disk:3", "--out", path("s.json")});
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = rze::Json::parse(rze::read_text_file(path("s.json")));
    EXPECT_EQ(j["check"], "campbell");
    EXPECT_EQ(j["trials"], 500);
    EXPECT_NEAR(j["reference"].get<double>(), 3.141592653589793, 1e-12);
}

TEST_F(CliTest, ConfigFileSuppliesFlagsAndExplicitFlagsWin) {
    rze::write_text_file(path("opts.json"), R"({"window": "disk:4", "seed": 6, "out": ")" + path("a.json") + "\"}");
    ASSERT_EQ(run({"sample", "--config", path("opts.json")}).status, 0);
    ASSERT_EQ(run({"sample", "--config", path("opts.json"), "--seed", "7", "--out", path("b.json")}).status, 0);
    EXPECT_EQ(rze::load_configuration(path("a.json")).seed(), 6u);
    EXPECT_EQ(rze::load_configuration(path("b.json")).seed(), 7u);
    EXPECT_EQ(rze::load_configuration(path("b.json")).window().outer_radius(), 4.0);
}

TEST_F(CliTest, HelpSucceeds) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("verify"), std::string::npos);
}
