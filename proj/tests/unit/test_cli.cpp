#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli/cli.hpp"
#include "cli/scene.hpp"
#include "lkpolar/lkpolar.hpp"

using namespace lkpolar;
using namespace lkpolar::cli;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(LKPOLAR_TEST_DATA) + "/" + name; }

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("lkpolar_test_" + name)).string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Matrix, TwoDimensional) {
    CliResult r = run_cli({"matrix", "--dim", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "m_1^1 = 1\nm_1^2 = 0.570796326794897\nm_2^2 = 1\n");
}

TEST(Invariants, QuadrantJson) {
    CliResult r = run_cli({"invariants", data("quadrant.json"), "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    Json j = Json::parse(r.out);
    const auto& o = j["objects"][0];
    EXPECT_EQ(o["name"], "quadrant");
    EXPECT_NEAR(o["sigma"]["value"][1].get<double>(), 0.75, 1e-15);
    EXPECT_NEAR(o["sigma"]["value"][2].get<double>(), 0.25, 1e-15);
    EXPECT_NEAR(o["lambda_loc"]["value"][1].get<double>(), 0.5 + std::numbers::pi / 8, 1e-15);
    EXPECT_NEAR(o["angle_sum_residual"]["value"].get<double>(), 0.0, 1e-15);
}

TEST(Invariants, OutputIsByteStable) {
    for (const char* fmt : {"json", "csv", "table"}) {
        CliResult a = run_cli({"invariants", data("two_quadrants.json"), "--format", fmt, "--samples", "5000", "--seed", "3"});
        CliResult b = run_cli({"invariants", data("two_quadrants.json"), "--format", fmt, "--samples", "5000", "--seed", "3"});
        ASSERT_EQ(a.code, 0) << a.err;
        EXPECT_EQ(a.out, b.out) << fmt;
    }
}

TEST(Invariants, CsvHasSeventeenDigits) {
    CliResult r = run_cli({"invariants", data("quadrant.json"), "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("quadrant,lambda_loc,1,0.89269908169872414,0"), std::string::npos) << r.out;
}

TEST(Invariants, UnknownObjectIsAnInputError) {
    CliResult r = run_cli({"invariants", data("quadrant.json"), "--object", "nope"});
    EXPECT_EQ(r.code, 2);
}

TEST(Polytope, SquareReport) {
    CliResult r = run_cli({"polytope", data("worked.json"), "--object", "square"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("Lambda_1 = 2\n"), std::string::npos);
    EXPECT_NE(r.out.find("r^2: 3.14159265358979"), std::string::npos);
    EXPECT_EQ(run_cli({"polytope", data("worked.json"), "--object", "quadrant"}).code, 2);
}

TEST(Verify, TwoQuadrantsPass) {
    std::string report = temp_path("verify_report.txt");
    CliResult r = run_cli({"verify", data("two_quadrants.json"), "--samples", "200000", "--seed", "7", "--report", report});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(read_file(report), r.out);
    std::remove(report.c_str());
}

TEST(Verify, ExitCodeTracksZScores) {
    CliResult r = run_cli({"verify", data("quadrant.json"), "--samples", "20000", "--seed", "1"});
    bool any_fail = r.out.find("FAIL") != std::string::npos;
    EXPECT_EQ(r.code, any_fail ? 1 : 0);
    EXPECT_EQ(run_cli({"verify", data("quadrant.json"), "--samples", "10"}).code, 2);
}

TEST(Sample, RoundTripIsIdempotent) {
    std::string path = temp_path("sample.json");
    CliResult r = run_cli({"sample", "--dim", "3", "--generators", "5", "--count", "4", "--seed", "9", "--out", path});
    ASSERT_EQ(r.code, 0) << r.err;
    std::string text = read_file(path);
    SceneFile scene = load_scene(path);
    ASSERT_EQ(scene.objects.size(), 4u);
    EXPECT_EQ(save_scene(scene), text);
    for (const auto& o : scene.objects) {
        const auto& c = std::get<ConvexCone>(o.geometry);
        EXPECT_TRUE(c.is_pointed());
    }
    std::remove(path.c_str());
}

TEST(Errors, ParseErrorNamesTheLine) {
    CliResult r = run_cli({"invariants", data("bad_syntax.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("bad_syntax.json:4:"), std::string::npos) << r.err;
}

TEST(Errors, ValidationErrorNamesTheObjectLine) {
    CliResult r = run_cli({"invariants", data("bad_dimension.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("bad_dimension.json:5:"), std::string::npos) << r.err;
}

TEST(Errors, SceneValidation) {
    auto expect_error = [](const std::string& text, const std::string& needle) {
        try {
            parse_scene(text, "mem");
            ADD_FAILURE() << "accepted: " << text;
        } catch (const SceneError& e) {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    expect_error(R"({"version": 2, "objects": []})", "version");
    expect_error(R"({"version": 1})", "objects");
    expect_error(R"({"version": 1, "objects": [{"name": "a", "kind": "cone", "ambient_dim": 2, "data": [[1, 0]]},
                   {"name": "a", "kind": "cone", "ambient_dim": 2, "data": [[0, 1]]}]})",
                 "duplicate");
    expect_error(R"({"version": 1, "objects": [{"name": "a", "kind": "blob", "ambient_dim": 2, "data": []}]})", "kind");
    expect_error(R"({"version": 1, "objects": [{"name": "a", "kind": "cone", "ambient_dim": 2, "data": [[0, 0]]}]})",
                 "ZeroGenerator");
    expect_error(R"({"version": 1, "objects": [{"name": "a", "kind": "polytope", "ambient_dim": 2, "data": []}]})",
                 "vertex");
}

TEST(Errors, UsageErrors) {
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
    EXPECT_EQ(run_cli({"matrix"}).code, 2);
    EXPECT_EQ(run_cli({"invariants", "/nonexistent/file.json"}).code, 2);
    EXPECT_EQ(run_cli({"invariants", data("quadrant.json"), "--format", "xml"}).code, 2);
}

TEST(Json, NumbersUseSeventeenDigits) {
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(1.0), "1");
    Json j = Json::parse(R"({"a": [1, 2.5], "b": {"c": "x"}})");
    EXPECT_EQ(dump_json(j), "{\n  \"a\": [1, 2.5],\n  \"b\": {\n    \"c\": \"x\"\n  }\n}\n");
}
