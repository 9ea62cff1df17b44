#include <doctest.h>

#include <cmath>

#include "nodal/coeffs.hpp"
#include "nodal/families.hpp"
#include "nodal/solver.hpp"

using namespace nodal;

namespace {

double max_error(const ScalarField& u, const std::function<double(Point)>& exact) {
    double e = 0.0;
    const Grid& g = u.grid();
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) e = std::max(e, std::abs(u.at(i, j) - exact(g.node(i, j))));
    return e;
}

// (2 + sin x1) F'(x1) = 1, so u = F(x1) + x2 solves div((2 + sin x1) grad u) = 0
double layered_exact(Point p) {
    const double s3 = std::sqrt(3.0);
    return 2.0 / s3 * std::atan((2.0 * std::tan(0.5 * p.x) + 1.0) / s3) + p.y;
}

CoefficientField layered() {
    return CoefficientField::general([](Point x) { return Matrix2{2.0 + std::sin(x.x), 0.0, 2.0 + std::sin(x.x)}; },
                                     3.0, 1.0, "layered");
}

}  // namespace

TEST_CASE("five-point Laplacian is exact on harmonic cubics") {
    const Grid g({0, 0}, 1.0, 65);
    const auto p = homogeneous_harmonic(3, 0.4);
    auto [u, rep] = solve_dirichlet(library_coefficient("identity"), g, {p, "cubic"});
    CHECK(max_error(u, p) < 1e-9);
    CHECK(rep.residual < 1e-8);
    CHECK(rep.iterations > 0);
}

TEST_CASE("constant coefficients keep linear data linear") {
    const Grid g({0.2, -0.1}, 0.8, 65);
    auto lin = [](Point p) { return 0.3 - p.x + 2.0 * p.y; };
    auto [u, rep] = solve_dirichlet(library_coefficient("diagonal"), g, {lin, "linear"});
    CHECK(max_error(u, lin) < 1e-9);
}

TEST_CASE("manufactured layered solution converges at second order") {
    auto err = [](int n) {
        auto [u, rep] = solve_dirichlet(layered(), Grid({0, 0}, 1.0, n), {layered_exact, "layered"});
        return max_error(u, layered_exact);
    };
    const double e65 = err(65), e129 = err(129);
    CHECK(e129 < 1e-4);
    CHECK(std::log2(e65 / e129) >= 1.9);
}

TEST_CASE("discrete maximum principle on oscillating coefficients") {
    for (const std::string coeff : {"sinsin", "checkerboard"}) {
        CAPTURE(coeff);
        auto [u, rep] = solve_dirichlet(library_coefficient(coeff, 0.125), Grid({0, 0}, 1.0, 129),
                                        boundary_trace("trig-7"));
        const MaxPrincipleCheck m = max_principle_check(u);
        CHECK(m.excess <= 1e-12 * u.max_abs());
        CHECK(m.interior_max <= m.boundary_max + 1e-12);
    }
}

TEST_CASE("resolution and coefficient preconditions") {
    CHECK_THROWS_AS(solve_dirichlet(library_coefficient("sinsin", 1.0 / 32), Grid({0, 0}, 1.0, 129),
                                    boundary_trace("linear-x1")),
                    ResolutionError);
    const auto skew = CoefficientField::general([](Point) { return Matrix2{2.0, 0.5, 2.0}; }, 3.0, 0.0, "skew");
    CHECK_THROWS_AS(solve_dirichlet(skew, Grid({0, 0}, 1.0, 33), boundary_trace("linear-x1")), InvalidArgument);
}

TEST_CASE("harmonic extension") {
    const Grid g({0, 0}, 1.0, 129);
    const auto p = homogeneous_harmonic(2);
    const ScalarField u = ScalarField::sample(g, p);
    const ScalarField w = harmonic_extension(u, Ball({0.1, 0.0}, 0.5));
    // quadratics are exactly discrete-harmonic
    CHECK(difference(u, w).max_abs() < 1e-9);

    const ScalarField bump = ScalarField::sample(g, [](Point x) { return x.x * x.x + x.y * x.y; });
    const ScalarField wb = harmonic_extension(bump, Ball({0, 0}, 0.5));
    CHECK(wb.at(64, 64) == doctest::Approx(0.25).epsilon(0.02));
    CHECK(wb.at(0, 0) == bump.at(0, 0));
    CHECK_THROWS_AS(harmonic_extension(u, Ball({0.9, 0.0}, 0.5)), DomainError);
}
