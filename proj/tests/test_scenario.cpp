#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "edl/presets.hpp"
#include "edl/scenario.hpp"

using namespace edl;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const std::filesystem::path kPresetDir = std::filesystem::path(EDL_SOURCE_DIR) / "presets";

}  // namespace

TEST_CASE("defaults when the file is empty") {
    const Scenario s = parse_config("");
    CHECK(s == Scenario{});
    CHECK_FALSE(s.sweep.has_value());
    CHECK_FALSE(s.infodyn.has_value());
}

TEST_CASE("keys, comments and aliases") {
    const Scenario s = parse_config(
        "# header comment\n"
        "name = demo run\n"
        "params.a = 2.5   # trailing comment\n"
        "b = 0.25\n"
        "control.u = 0.7\n"
        "\n"
        "integrator.method = rk4\n"
        "integrator.clamp = false\n"
        "integrator.stride = 10\n"
        "sweep.u_step = 0.05\n"
        "infodyn.tau = 0.5\n");
    CHECK(s.name == "demo run");
    CHECK(s.params.a == 2.5);
    CHECK(s.params.b == 0.25);
    CHECK(s.control.u == 0.7);
    CHECK(s.integrator.method == Method::RK4);
    CHECK_FALSE(s.integrator.clamp_nonneg);
    CHECK(s.integrator.stride == 10);
    REQUIRE(s.sweep.has_value());
    CHECK(s.sweep->u_step == 0.05);
    REQUIRE(s.infodyn.has_value());
    CHECK(s.infodyn->config.tau == 0.5);
    CHECK_FALSE(s.infodyn->config.lambda.has_value());
}

TEST_CASE("parse errors carry the line number") {
    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            parse_config(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("params.a = 1\nparams.zz = 2\n") == 2);
    CHECK(line_of("params.a = 1\n\nparams.a = 2\n") == 3);
    CHECK(line_of("params.a = 1x\n") == 1);
    CHECK(line_of("params.a\n") == 1);
    CHECK(line_of("integrator.method = midpoint\n") == 1);
    CHECK(line_of("a = 1\nparams.a = 2\n") == 2);  // alias and full key are the same key
}

TEST_CASE("invalid values are reported together") {
    try {
        parse_config("params.b = 0\ncontrol.u = 1.5\nintegrator.h = 0\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.violations().size() == 3);
        const std::string what = e.what();
        CHECK(what.find("params.b") != std::string::npos);
        CHECK(what.find("control.u") != std::string::npos);
        CHECK(what.find("integrator.h") != std::string::npos);
    }
}

TEST_CASE("sweep starting at u = 0 is rejected") {
    try {
        parse_config("sweep.u_min = 0\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("singular") != std::string::npos);
    }
}

TEST_CASE("serialize then parse is the identity") {
    Scenario s;
    s.name = "round trip";
    s.description = "values that need all 17 digits";
    s.params.a = 0.1;
    s.params.r_M = 1.0 / 3.0;
    s.control.u = 0.123456789012345678;
    s.init = {1e-300, 2.5, 7};
    s.integrator.method = Method::RK4;
    s.integrator.T = 12.75;
    s.sweep = SweepSpec{.u_min = 0.1, .u_max = 0.9, .u_step = 0.02, .mode = SweepMode::Simulated};
    s.infodyn = InfodynSpec{};
    s.infodyn->config.lambda = 0.3;
    const std::string text = serialize_config(s);
    CHECK(parse_config(text) == s);
    CHECK(serialize_config(parse_config(text)) == text);
}

TEST_CASE("every bundled preset parses, validates and round-trips") {
    REQUIRE(bundled_presets().size() >= 5);
    for (const auto& p : bundled_presets()) {
        CAPTURE(p.name);
        const Scenario s = parse_config(p.text);
        CHECK(s.name == p.name);
        CHECK(validate(s).ok());
        CHECK(parse_config(serialize_config(s)) == s);
        CHECK(std::string(p.text) == read_file(kPresetDir / (std::string(p.name) + ".cfg")));
    }
    CHECK(find_preset("degeneration").has_value());
    CHECK_FALSE(find_preset("nope").has_value());
    CHECK_THROWS_AS(load_preset("nope"), Error);
}

TEST_CASE("degeneration preset from disk") {
    const Scenario s = load_config((kPresetDir / "degeneration.cfg").string());
    CHECK(s.control.u == 0.8);
    CHECK(s.init == StateVec{1, 1, 1});
    CHECK(s == load_preset("degeneration"));
    CHECK_THROWS_AS(load_config("/nonexistent/dir/x.cfg"), Error);
}

TEST_CASE("config_keys lists canonical keys once each") {
    const auto& keys = config_keys();
    CHECK(std::find(keys.begin(), keys.end(), "params.r_H") != keys.end());
    CHECK(std::find(keys.begin(), keys.end(), "infodyn.kappa") != keys.end());
    std::set<std::string> unique(keys.begin(), keys.end());
    CHECK(unique.size() == keys.size());
}
