#include <cmath>
#include <filesystem>
#include <limits>
#include <string>

#include <gtest/gtest.h>

#include "rze/descriptors.hpp"
#include "rze/io.hpp"

using rze::cplx;
using rze::Json;

TEST(Json, ConfigurationRoundTripIsExact) {
    const auto config = rze::sample_poisson(rze::IntensityMeasure::lebesgue(1.0), rze::Window::annulus(0.5, 6.0), 99);
    const rze::ConfigurationFile file{config, std::string("lebesgue:1"), std::nullopt};
    const std::string text = rze::to_json(file).dump(2);
    const auto back = rze::configuration_from_json(Json::parse(text));
    EXPECT_FALSE(back.is_marked());
    EXPECT_EQ(std::get<rze::Configuration>(back.config), config);
    EXPECT_EQ(back.intensity, file.intensity);
    EXPECT_EQ(rze::to_json(back).dump(2), text);
}

TEST(Json, MarkedRoundTrip) {
    const auto marked = rze::sample_marked(rze::IntensityMeasure::lebesgue(1.0), rze::MarkDistribution::zeta(3.0),
                                           rze::Window::disk(4.0), 5);
    const rze::ConfigurationFile file{marked, std::string("lebesgue:1"), std::string("zeta:3")};
    const auto j = rze::to_json(file);
    ASSERT_TRUE(j.contains("marks"));
    const auto back = rze::configuration_from_json(j);
    ASSERT_TRUE(back.is_marked());
    EXPECT_EQ(std::get<rze::MarkedConfiguration>(back.config), marked);
    EXPECT_EQ(back.mark_distribution, file.mark_distribution);
}

TEST(Json, FieldOrderAndNames) {
    const rze::Configuration c({cplx{0.25, -0.5}}, rze::Window::disk(1.0), 7);
    const auto j = rze::to_json(rze::ConfigurationFile{c, std::nullopt, std::nullopt});
    EXPECT_EQ(j.dump(),
              R"({"window":{"kind":"disk","inner_radius":0.0,"outer_radius":1.0},"seed":7,"points":[[0.25,-0.5]]})");
}

TEST(Json, RejectsMalformedInput) {
    const auto bad = [](const char* text) { return rze::configuration_from_json(Json::parse(text)); };
    EXPECT_THROW(bad(R"({"seed":1,"points":[]})"), rze::ValidationError);
    EXPECT_THROW(bad(R"({"window":{"kind":"square","inner_radius":0,"outer_radius":1},"seed":1,"points":[]})"),
                 rze::ValidationError);
    EXPECT_THROW(bad(R"({"window":{"kind":"disk","inner_radius":0,"outer_radius":1},"seed":1,"points":[[2,0]]})"),
                 rze::ValidationError);
    EXPECT_THROW(bad(R"({"window":{"kind":"disk","inner_radius":0,"outer_radius":1},"seed":1,"points":[[0.1]]})"),
                 rze::ValidationError);
    EXPECT_THROW(
        bad(R"({"window":{"kind":"disk","inner_radius":0,"outer_radius":1},"seed":1,"points":[[0.1,0]],"marks":[0]})"),
        rze::ValidationError);
    EXPECT_THROW(
        bad(R"({"window":{"kind":"disk","inner_radius":0,"outer_radius":1},"seed":1,"points":[[0.1,0]],"marks":[1,1]})"),
        rze::ValidationError);
}

TEST(Csv, GridFormat) {
    rze::GridResult r;
    r.grid.nx = 2;
    r.grid.ny = 1;
    r.nodes = {{cplx{0.1, 0.0}, -std::numeric_limits<double>::infinity(), 0.0}, {cplx{0.5, -1.0}, 1.5, -0.25}};
    EXPECT_EQ(rze::grid_csv(r), "re,im,log_abs,phase\n0.10000000000000001,0,-inf,0\n0.5,-1,1.5,-0.25\n");
}

TEST(Files, MissingFileIsIoError) {
    EXPECT_THROW(rze::load_configuration("/nonexistent/dir/config.json"), rze::IoError);
    EXPECT_THROW(rze::write_text_file("/nonexistent/dir/out.csv", "x"), rze::IoError);
}

TEST(Files, NotJsonIsValidationError) {
    const auto path = std::filesystem::temp_directory_path() / "rze_test_io_not_json.json";
    rze::write_text_file(path.string(), "{ not json");
    EXPECT_THROW(rze::load_configuration(path.string()), rze::ValidationError);
    std::filesystem::remove(path);
}

TEST(Descriptors, ParseAndDescribe) {
    EXPECT_EQ(rze::parse_window("annulus:1:2.5").description(), "annulus:1:2.5");
    EXPECT_EQ(rze::parse_marks("geometric:0.5").description(), "geometric:0.5");
    EXPECT_EQ(rze::parse_marks("zeta:1.5:20").description(), "zeta:1.5:20");
    EXPECT_EQ(rze::parse_test_function("gaussian:2").description(), rze::TestFunction::gaussian(2.0).description());
    EXPECT_THROW(rze::parse_window("disk"), rze::ValidationError);
    EXPECT_THROW(rze::parse_window("disk:1:2"), rze::ValidationError);
    EXPECT_THROW(rze::parse_marks("geometric:1.5"), rze::ValidationError);
    EXPECT_THROW(rze::parse_intensity(""), rze::ValidationError);
}
