#include <doctest.h>

#include <cmath>

#include "nodal/errors.hpp"
#include "nodal/geometry.hpp"

using namespace nodal;

TEST_CASE("grid nodes and spacing") {
    const Grid g({0.0, 0.0}, 1.0, 257);
    CHECK(g.spacing() == doctest::Approx(1.0 / 128));
    CHECK(g.node(0, 0) == Point{-1.0, -1.0});
    CHECK(g.node(128, 128).x == doctest::Approx(0.0));
    CHECK(g.node(256, 256).y == doctest::Approx(1.0));
    CHECK(g.index(3, 2) == 2u * 257 + 3);
    CHECK(g.size() == 257u * 257);
    CHECK_THROWS_AS(Grid({0, 0}, 1.0, 8), InvalidArgument);
    CHECK_THROWS_AS(Grid({0, 0}, -1.0, 65), InvalidArgument);
}

TEST_CASE("grid containment") {
    const Grid g({0.5, 0.0}, 1.0, 65);
    CHECK(g.contains(Point{1.5, 1.0}));
    CHECK_FALSE(g.contains(Point{1.6, 0.0}));
    CHECK(g.contains(Ball({0.5, 0.0}, 1.0)));
    CHECK_FALSE(g.contains(Ball({0.5, 0.0}, 1.0), 0.1));
    CHECK_FALSE(g.contains(Ball({0.0, 0.0}, 1.0)));
}

TEST_CASE("balls and annuli validate their radii") {
    CHECK_THROWS_AS(Ball({0, 0}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(Annulus({0, 0}, 0.5, 0.5), InvalidArgument);
    CHECK_THROWS_AS(Annulus({0, 0}, -0.1, 0.5), InvalidArgument);
    const Annulus a({0, 0}, 0.5, 1.0);
    CHECK(a.contains({0.75, 0.0}));
    CHECK_FALSE(a.contains({0.25, 0.0}));
    CHECK(Ball({1, 1}, 0.5).contains({1.5, 1.0}));
}

TEST_CASE("node enumeration matches brute force") {
    const Grid g({0, 0}, 1.0, 65);
    const Ball b({0.13, -0.27}, 0.41);
    int fast = 0, brute = 0;
    for_each_node_in(g, b, [&](int, int, Point) { ++fast; });
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) brute += distance(g.node(i, j), b.center) <= b.radius;
    CHECK(fast == brute);
    CHECK(fast > 0);
}

TEST_CASE("circle sampling") {
    const auto pts = sample_circle({1.0, 2.0}, 0.5, 8);
    REQUIRE(pts.size() == 8);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        CHECK(pts[k].angle == doctest::Approx(k * kTwoPi / 8));
        CHECK(distance(pts[k].point, {1.0, 2.0}) == doctest::Approx(0.5));
    }
    CHECK(pts[2].point.x == doctest::Approx(1.0));
    CHECK(pts[2].point.y == doctest::Approx(2.5));
    CHECK_THROWS_AS(sample_circle({0, 0}, 1.0, 4), InvalidArgument);
    CHECK_THROWS_AS(sample_circle({0, 0}, 0.0, 16), InvalidArgument);
}

TEST_CASE("annulus radii") {
    const auto r = annulus_radii(0.5, 0.7, 4);
    REQUIRE(r.size() == 5);
    CHECK(r.front() == 0.5);
    CHECK(r.back() == 0.7);
    CHECK(r[2] == doctest::Approx(0.6));
    CHECK_THROWS_AS(annulus_radii(0.5, 0.7, 0), InvalidArgument);
    CHECK_THROWS_AS(annulus_radii(0.7, 0.5, 3), InvalidArgument);
}

TEST_CASE("angles") {
    CHECK(polar_angle({0.0, 1.0}) == doctest::Approx(kPi / 2));
    CHECK(polar_angle({0.0, -1.0}) == doctest::Approx(3 * kPi / 2));
    CHECK(polar_angle({2.0, 1.0}, {1.0, 1.0}) == doctest::Approx(0.0));
    CHECK(wrap_angle(-kPi / 2) == doctest::Approx(3 * kPi / 2));
    CHECK(wrap_angle(5 * kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(kTwoPi) == 0.0);
}
