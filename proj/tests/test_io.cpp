#include <doctest.h>

#include "helpers.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/render.hpp"
#include "holonomy/sceneio.hpp"

using namespace holonomy;

TEST_CASE("scene JSON round-trips") {
    const char* text = R"({
        "matrix": [[2, 1], [1, 1]],
        "orbits": [{"point": ["0/1", "0/1"], "omega": 1, "slope": [5, 1]}]
    })";
    const Scene s = parse_scene(text);
    CHECK(s.orbits.size() == 1);
    CHECK(s.orbits[0].slope.p == 5);
    const Scene again = parse_scene(scene_to_json(s));
    CHECK(again.eigen.lambda == s.eigen.lambda);
    CHECK(again.orbits[0].orbit.omega == 1);
}

TEST_CASE("malformed scene input") {
    CHECK_THROWS_WITH_AS(parse_scene("{not json"), doctest::Contains("ParseError"), Error);
    CHECK_THROWS_AS(parse_scene(R"({"matrix": [[2,1],[1,1]]})"), Error);
    CHECK_THROWS_AS(
        parse_scene(
            R"({"matrix": [[2,1],[1,1]], "orbits": [{"point": ["x","0/1"], "slope": [5,1]}]})"),
        Error);
}

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/4") == Rat{3, 4});
    CHECK(parse_rational("7/4") == Rat{3, 4});   // reduced mod 1
    CHECK(parse_rational("-1/4") == Rat{3, 4});  // wrapped into [0,1)
    CHECK(parse_rational("2") == Rat{0, 1});
    CHECK_THROWS_AS(parse_rational("a/b"), Error);
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
}

TEST_CASE("figures render deterministically") {
    const Scene& s = fig8_scene();
    const std::string a = render_blowup_figure(s, {});
    const std::string b = render_blowup_figure(s, {});
    CHECK(a == b);
    CHECK(a.find("<svg") != std::string::npos);
    CHECK(a.find("<circle") != std::string::npos);   // singularity dots
    CHECK(a.find("<polyline") != std::string::npos); // section traces

    const std::string sm = render_stepmap_figure(s, {});
    CHECK(sm.find("<svg") != std::string::npos);
    CHECK(sm == render_stepmap_figure(s, {}));
}

TEST_CASE("blowup figure marks terminating sections") {
    BlowupFigureConfig cfg;
    cfg.startValues = {1.0};
    const std::string fig = render_blowup_figure(fig8_scene(), cfg);
    // the cross glyph is two line elements after the polyline
    CHECK(fig.find("<line") != std::string::npos);
}
