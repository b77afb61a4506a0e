#include <doctest.h>

#include "saccade/errors.hpp"
#include "saccade/svg.hpp"

using namespace saccade;

TEST_CASE("scatter SVG bytes are exactly the hand-computed golden output") {
    Embedding2D e;
    e.points = {{0.0, 0.0}, {10.0, 20.0}};
    const std::string svg = render_scatter_svg(e, {0, 1});
    const std::string expected =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 600 600\">\n"
        "<rect width=\"600\" height=\"600\" fill=\"#ffffff\"/>\n"
        "<circle cx=\"30.00\" cy=\"570.00\" r=\"2\" fill=\"#d62728\"/>\n"
        "<circle cx=\"570.00\" cy=\"30.00\" r=\"2\" fill=\"#1f77b4\"/>\n"
        "</svg>\n";
    CHECK(svg == expected);
}

TEST_CASE("scatter SVG has one circle per point and is deterministic") {
    Embedding2D e;
    e.points = {{0.0, 1.0}, {2.0, -1.0}, {0.5, 0.25}};
    const std::string svg = render_scatter_svg(e, {0, 1, 1});
    std::size_t circles = 0;
    for (std::size_t pos = svg.find("<circle"); pos != std::string::npos;
         pos = svg.find("<circle", pos + 1)) {
        ++circles;
    }
    CHECK(circles == 3);
    CHECK(svg == render_scatter_svg(e, {0, 1, 1}));
}

TEST_CASE("scatter SVG rejects mismatched labels") {
    Embedding2D e;
    e.points = {{0.0, 0.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(render_scatter_svg(e, {0}), ValidationError);
    Embedding2D empty;
    CHECK_THROWS_AS(render_scatter_svg(empty, {}), ValidationError);
}

TEST_CASE("coincident points land mid-canvas instead of dividing by zero") {
    Embedding2D e;
    e.points = {{3.0, 3.0}, {3.0, 3.0}};
    const std::string svg = render_scatter_svg(e, {0, 1});
    CHECK(svg.find("cx=\"300.00\" cy=\"300.00\"") != std::string::npos);
}

TEST_CASE("line SVG is deterministic and spans the canvas") {
    const std::vector<double> values{0.0, 1.0, 0.5, -0.25};
    const std::string svg = render_line_svg(values);
    CHECK(svg == render_line_svg(values));
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("30.00,") != std::string::npos);  // first x at the left margin
    CHECK(svg.find("570.00,") != std::string::npos); // last x at the right margin
    CHECK_THROWS_AS(render_line_svg({1.0}), ValidationError);
}
