#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "nodal/errors.hpp"
#include "nodal/field.hpp"

using namespace nodal;

TEST_CASE("bilinear interpolation reproduces bilinear functions") {
    const Grid g({0, 0}, 1.0, 33);
    auto f = [](Point p) { return 1.0 + 2.0 * p.x - 0.5 * p.y + 3.0 * p.x * p.y; };
    const ScalarField u = ScalarField::sample(g, f);
    for (Point p : {Point{0.123, -0.456}, Point{-0.99, 0.99}, Point{1.0, 1.0}, Point{-1.0, 0.3}})
        CHECK(u(p) == doctest::Approx(f(p)).epsilon(1e-12));
    CHECK_THROWS_AS(u({1.01, 0.0}), DomainError);
}

TEST_CASE("construction checks") {
    const Grid g({0, 0}, 1.0, 17);
    CHECK_THROWS_AS(ScalarField(g, std::vector<double>(10)), InvalidArgument);
    std::vector<double> v(g.size(), 0.0);
    v[5] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(ScalarField(g, v), InvalidArgument);
}

TEST_CASE("affine, difference and max_abs") {
    const Grid g({0, 0}, 1.0, 17);
    const ScalarField u = ScalarField::sample(g, [](Point p) { return p.x; });
    const ScalarField w = u.affine(2.0, 1.0);
    CHECK(w.max_abs() == doctest::Approx(3.0));
    CHECK(difference(w, u).max_abs() == doctest::Approx(2.0));
    const ScalarField other = ScalarField::sample(Grid({0, 0}, 2.0, 17), [](Point) { return 0.0; });
    CHECK_THROWS_AS(difference(u, other), InvalidArgument);
}

TEST_CASE("signed margin against brute force over cells") {
    const Grid g({0, 0}, 1.0, 65);
    const ScalarField u = ScalarField::sample(g, [](Point p) { return p.x + 0.3 * std::sin(3.0 * p.y); });
    const Ball b({0.5, 0.1}, 0.2);
    const double h = g.spacing();
    double brute = std::numeric_limits<double>::infinity();
    for (int j = 0; j + 1 < g.n(); ++j) {
        for (int i = 0; i + 1 < g.n(); ++i) {
            // cell meets the ball iff its nearest point is inside
            const Point lo = g.node(i, j);
            const double nx = std::clamp(b.center.x, lo.x, lo.x + h) - b.center.x;
            const double ny = std::clamp(b.center.y, lo.y, lo.y + h) - b.center.y;
            if (std::hypot(nx, ny) > b.radius) continue;
            brute = std::min({brute, u.at(i, j), u.at(i + 1, j), u.at(i, j + 1), u.at(i + 1, j + 1)});
        }
    }
    CHECK(signed_margin(u, b, +1) == brute);
    CHECK(has_strict_sign(u, b, +1));
    CHECK_FALSE(has_strict_sign(u, b, -1));
    CHECK_FALSE(has_strict_sign(u, Ball({0.0, 0.0}, 0.1), +1));
}
