#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "levyqsd/error.hpp"
#include "levyqsd/io.hpp"

using namespace levyqsd;
using io::json;

TEST_CASE("model documents") {
    const LevyModel b = io::model_from_json(json::parse(R"({"kind":"sp","family":"brownian","params":{"sigma":1,"c":1}})"));
    CHECK(b.is_brownian());
    CHECK(b.kind() == Kind::SpectrallyPositive);
    const LevyModel e =
        io::model_from_json(json::parse(R"({"kind":"sp","family":"cp_erlang","params":{"lambda":1,"shape":2,"nu":3}})"));
    CHECK(e.is_cp_erlang());
    const json back = io::model_to_json(e);
    CHECK(io::model_from_json(back).describe() == e.describe());
    CHECK(back["params"]["shape"] == 2);
}

TEST_CASE("generic polynomial exponent") {
    const LevyModel g = io::model_from_json(json::parse(
        R"({"kind":"sp","family":"generic","params":{"coefficients":[0,1,0.5],"domain":[null,null],"analyticity_asserted":true}})"));
    CHECK(g.is_generic());
    CHECK(psi_eval(g, 2.0) == doctest::Approx(4.0));
    CHECK(psi_eval(g, 2.0, 1) == doctest::Approx(3.0));
    CHECK(psi_eval(g, 2.0, 2) == doctest::Approx(1.0));
    CHECK(check_assumptions(g).certified());
    CHECK_THROWS_AS((void)io::model_to_json(g), Error);
}

TEST_CASE("schema errors") {
    auto code_of = [](const char* text) {
        try {
            (void)io::model_from_json(json::parse(text));
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::DomainError;
    };
    CHECK(code_of(R"({"family":"brownian","params":{"sigma":1,"c":1}})") == ErrorCode::SchemaError);
    CHECK(code_of(R"({"kind":"up","family":"brownian","params":{"sigma":1,"c":1}})") == ErrorCode::SchemaError);
    CHECK(code_of(R"({"kind":"sp","family":"levy","params":{}})") == ErrorCode::SchemaError);
    CHECK(code_of(R"({"kind":"sp","family":"cp_erlang","params":{"lambda":1,"shape":2.5,"nu":3}})") ==
          ErrorCode::SchemaError);
    CHECK(code_of(R"({"kind":"sp","family":"brownian","params":{"sigma":"x","c":1}})") == ErrorCode::SchemaError);
    CHECK(code_of(R"({"kind":"sp","family":"brownian","params":{"sigma":-1,"c":1}})") == ErrorCode::InvalidModel);
}

TEST_CASE("grids") {
    const auto g = io::parse_log_grid("5:80:5");
    REQUIRE(g.size() == 5);
    CHECK(g[0] == 5.0);
    CHECK(g[1] == 10.0);
    CHECK(g[4] == 80.0);
    CHECK_THROWS_AS((void)io::parse_log_grid("1:2"), Error);
    CHECK_THROWS_AS((void)io::parse_log_grid("0:2:3"), Error);
    CHECK_THROWS_AS((void)io::parse_log_grid("1:2:x"), Error);
    const auto l = io::linear_grid(0.2, 4.0, 20);
    CHECK(l.front() == 0.2);
    CHECK(l.back() == 4.0);
}

TEST_CASE("17-digit formatting round-trips doubles") {
    for (double x : {0.1, 1.0 / 3.0, -2.718281828459045, 6.02214076e23, 5e-324, 0.0}) {
        CHECK(std::strtod(io::format_double(x).c_str(), nullptr) == x);
    }
}

TEST_CASE("study documents") {
    const json doc = json::parse(R"({
        "model": {"kind":"sp","family":"brownian","params":{"sigma":1,"c":1}},
        "points": [[1, 1], [0, 0.5]],
        "times": {"from": 1, "to": 100, "count": 3},
        "inversion": {"terms": 51},
        "simulation": {"replications": 1000, "seed": 3, "tilt": "none"},
        "density": {"which": "xi", "x": [0.5, 1.0], "y": {"from": 1, "to": 2, "count": 3, "spacing": "linear"}},
        "output": {"dir": "somewhere"},
        "threads": 2
    })");
    const io::StudySpec s = io::study_from_json(doc, ".");
    CHECK(s.points.size() == 2);
    CHECK(s.times == std::vector<double>{1.0, 10.0, 100.0});
    CHECK(s.inversion.terms == 51);
    CHECK(s.simulation.enabled);
    CHECK(s.simulation.tilt == Tilt::None);
    CHECK(s.density == DensityKind::Xi);
    CHECK(s.y_grid == std::vector<double>{1.0, 1.5, 2.0});
    CHECK(s.out_dir == "somewhere");
    CHECK(s.threads == 2);

    // The serialised form reads back to the same spec.
    const io::StudySpec again = io::study_from_json(json{{"study", io::study_to_json(s)}}, ".");
    CHECK(io::study_to_json(again) == io::study_to_json(s));
}

TEST_CASE("study validation") {
    io::StudySpec s;
    s.model = json::parse(R"({"kind":"sp","family":"brownian","params":{"sigma":1,"c":1}})");
    s.times = {3.0, 2.0};
    CHECK_THROWS_AS(io::validate_study(s), Error);
    s.times = {2.0, 3.0};
    s.points.clear();
    CHECK_THROWS_AS(io::validate_study(s), Error);
    s.points = {{0.0, 0.0}};
    s.inversion.terms = 20;
    try {
        io::validate_study(s);
        FAIL("expected SchemaError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SchemaError);
    }
}

TEST_CASE("file errors") {
    try {
        (void)io::read_json("/nonexistent/file.json");
        FAIL("expected IoError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoError);
    }
    const auto tmp = std::filesystem::temp_directory_path() / "levyqsd_bad.json";
    std::ofstream(tmp) << "{not json";
    try {
        (void)io::read_json(tmp);
        FAIL("expected SchemaError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SchemaError);
    }
    std::filesystem::remove(tmp);
}
