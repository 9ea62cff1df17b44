#include <doctest.h>

#include <cmath>
#include <set>

#include "nodal/certify.hpp"
#include "nodal/coeffs.hpp"
#include "nodal/errors.hpp"
#include "nodal/families.hpp"
#include "nodal/nodal.hpp"
#include "nodal/solver.hpp"

using namespace nodal;

namespace {

ScalarField sampled(int n, const std::function<double(Point)>& f, double hw = 1.0) {
    return ScalarField::sample(Grid({0, 0}, hw, n), f);
}

ScalarField solved_centered(double eps, int n, double hw = 1.0) {
    auto [u, rep] =
        solve_dirichlet(library_coefficient("sinsin", eps), Grid({0, 0}, hw, n), boundary_trace("linear-x1"));
    return u.affine(1.0, -u({0, 0}));
}

}  // namespace

TEST_CASE("decomposition of x1") {
    const ScalarField u = sampled(513, [](Point p) { return p.x; });
    const auto dec = decompose_annuli(u, {0, 0}, 0.5, 0.7, 4, 2.0);
    REQUIRE(dec.k() == 4);
    for (int i = 0; i <= 4; ++i) {
        CHECK(dec.M[i] == doctest::Approx(dec.radii[i]).epsilon(0.01));
        CHECK(dec.m[i] == doctest::Approx(-dec.radii[i]).epsilon(0.01));
        CHECK(dec.M[i] <= dec.radii[i]);
    }
    CHECK(dec.k_plus == 4);
    CHECK(dec.k_minus == 4);
    CHECK(chain_inequality_holds(dec));
    CHECK(dec.growth_exponent() == doctest::Approx(std::log2(1.4)).epsilon(0.01));
}

TEST_CASE("decomposition invariants") {
    const ScalarField u = sampled(257, homogeneous_harmonic(3));
    const auto dec = decompose_annuli(u, {0, 0}, 0.5, 0.7, 12, 1.3);
    CHECK(3 * static_cast<int>(dec.good_both().size()) >= dec.k());
    for (int i = 0; i < dec.k(); ++i) {
        CHECK(dec.M[i + 1] >= dec.M[i]);
        CHECK(dec.m[i + 1] <= dec.m[i]);
    }
    // monotone in S
    const auto wider = decompose_annuli(u, {0, 0}, 0.5, 0.7, 12, 2.0);
    CHECK(std::includes(wider.good_plus.begin(), wider.good_plus.end(), dec.good_plus.begin(), dec.good_plus.end()));
    CHECK(std::includes(wider.good_minus.begin(), wider.good_minus.end(), dec.good_minus.begin(),
                        dec.good_minus.end()));
}

TEST_CASE("auto annulus count and the good-index bound on random harmonics") {
    for (const auto& p : random_harmonic_family(20)) {
        CAPTURE(p.id);
        const ScalarField u = sampled(257, p);
        const double S = 1.5;
        const auto dec = decompose_annuli(u, {0, 0}, 0.5, 0.7, 0, S);
        const int bad = std::max(1, static_cast<int>(std::ceil(dec.growth_exponent() / std::log2(S) - 1e-12)));
        CHECK(dec.k() == 3 * bad);
        CHECK(chain_inequality_holds(dec));
        CHECK(3 * static_cast<int>(dec.good_both().size()) >= dec.k());
        // counting bound with measured sup ratio
        CHECK(dec.k_plus >= dec.k() - static_cast<int>(std::ceil(std::log(dec.M.back() / dec.M.front()) / std::log(S))));
    }
}

TEST_CASE("decomposition hypotheses") {
    const ScalarField shifted = sampled(129, [](Point p) { return p.x + 0.1; });
    CHECK_THROWS_AS(decompose_annuli(shifted, {0, 0}, 0.5, 0.7, 4, 2.0), HypothesisViolation);
    const ScalarField pos = sampled(129, [](Point p) { return p.x * p.x + p.y * p.y; });
    CHECK_THROWS_AS(decompose_annuli(pos, {0, 0}, 0.5, 0.7, 4, 2.0), HypothesisViolation);
    const ScalarField zero = sampled(129, [](Point) { return 0.0; });
    CHECK_THROWS_AS(decompose_annuli(zero, {0, 0}, 0.5, 0.7, 4, 2.0), DegenerateFunctionError);
    const ScalarField x = sampled(129, [](Point p) { return p.x; });
    CHECK_THROWS_AS(decompose_annuli(x, {0, 0}, 0.5, 0.7, 4, 1.0), InvalidArgument);
    CHECK_THROWS_AS(decompose_annuli(x, {0, 0}, 0.5, 0.7, 2, 2.0), InvalidArgument);
    CHECK_THROWS_AS(decompose_annuli(x, {0, 0}, 0.5, 1.2, 4, 2.0), DomainError);
}

TEST_CASE("sign-definite balls of x1 and x1 x2") {
    const ScalarField u = sampled(513, [](Point p) { return p.x; });
    const auto dec = decompose_annuli(u, {0, 0}, 0.5, 0.7, 4, 2.0);
    const auto balls = locate_sign_definite_balls(u, dec, 0.02);
    CHECK(balls.size() == 8);
    for (const auto& b : balls) {
        const double a = polar_angle(b.ball.center);
        if (b.sign > 0)
            CHECK(std::min(a, kTwoPi - a) < 0.01);
        else
            CHECK(std::abs(a - kPi) < 0.01);
    }
    const double certified = certified_length_from_decomposition(u, dec, balls);
    CHECK(certified == doctest::Approx(0.16));
    CHECK(nodal_length_in(u, Annulus({0, 0}, 0.5, 0.7)) == doctest::Approx(0.4));
    CHECK(certified <= nodal_length_in(u, Annulus({0, 0}, 0.5 - dec.width(), 0.7)));
    CHECK_THROWS_AS(locate_sign_definite_balls(u, dec, 0.01), InvalidArgument);

    const ScalarField v = sampled(513, [](Point p) { return p.x * p.y; });
    const auto dv = decompose_annuli(v, {0, 0}, 0.5, 0.7, 4, 2.0);
    for (const auto& b : locate_sign_definite_balls(v, dv, 0.02)) {
        const double a = polar_angle(b.ball.center);
        const double target = b.sign > 0 ? kPi / 4 : 3 * kPi / 4;
        CHECK(std::abs(std::remainder(a - target, kPi)) < 0.01);
    }
}

TEST_CASE("balls that break the sign are dropped") {
    const ScalarField u = sampled(513, [](Point p) { return p.x; });
    const auto dec = decompose_annuli(u, {0, 0}, 0.5, 0.7, 4, 2.0);
    CHECK(certified_length_from_decomposition(u, dec, {}) == 0.0);
    // a forged ball straddling the nodal line never counts
    std::vector<SignDefiniteBall> forged = {{Ball({0.0, 0.55}, 0.02), +1, 0}, {Ball({-0.55, 0.0}, 0.02), -1, 0}};
    CHECK(certified_length_from_decomposition(u, dec, forged) == 0.0);
    // too wide for the annulus
    std::vector<SignDefiniteBall> wide = {{Ball({0.5, 0.0}, 0.06), +1, 0}, {Ball({-0.5, 0.0}, 0.06), -1, 0}};
    CHECK(certified_length_from_decomposition(u, dec, wide) == 0.0);
}

TEST_CASE("soundness on a cubic") {
    const ScalarField u = sampled(513, homogeneous_harmonic(3));
    const auto dec = decompose_annuli(u, {0, 0}, 0.5, 0.7, 0, 2.0);
    const auto balls = locate_sign_definite_balls(u, dec, 0.5 * dec.width());
    const double certified = certified_length_from_decomposition(u, dec, balls);
    CHECK(certified > 0.0);
    CHECK(certified <= nodal_length_in(u, Annulus({0, 0}, 0.5 - dec.width(), 0.7)));
}

TEST_CASE("tiling, single-ball path") {
    const ScalarField u = solved_centered(0.25, 129);
    const auto cert = tile_and_certify(u, library_coefficient("sinsin", 0.25));
    CHECK(cert.single_ball);
    REQUIRE(cert.cubes.size() == 1);
    CHECK(cert.total_bound >= 0.01);
    CHECK(cert.disjoint_count == 1);
}

TEST_CASE("tiling at eps = 1/32") {
    const ScalarField u = solved_centered(1.0 / 32, 513);
    TilingOptions opts;
    opts.case_threshold = 0.2;
    const auto cert = tile_and_certify(u, library_coefficient("sinsin", 1.0 / 32), opts);
    CHECK_FALSE(cert.single_ball);
    CHECK(cert.k == 32);
    CHECK(cert.disjoint_count * 25 >= 32);
    CHECK(cert.total_bound > 0.0);
    CHECK(cert.total_bound >= cert.disjoint_count * cert.min_cube_bound - 1e-15);
    CHECK(cert.total_bound == doctest::Approx(cert.disjoint_count * cert.per_cube_bound));
    std::vector<const TileCube*> taken;
    for (const auto& c : cert.cubes)
        if (c.selected) taken.push_back(&c);
    for (std::size_t a = 0; a < taken.size(); ++a)
        for (std::size_t b = a + 1; b < taken.size(); ++b)
            CHECK(std::max(std::abs(taken[a]->cx - taken[b]->cx), std::abs(taken[a]->cy - taken[b]->cy)) > 2);
    for (const auto* c : taken) {
        CHECK(std::hypot(c->cx, c->cy) + std::sqrt(2.0) <= cert.k);
        CHECK(c->chain_ok);
    }
    CHECK(cert.total_bound <= nodal_length_in(u, Ball({0, 0}, 1.0)));
}

TEST_CASE("tiling scale covariance under dyadic rescaling") {
    const ScalarField u = solved_centered(1.0 / 16, 257);
    const ScalarField big = ScalarField::sample(Grid({0, 0}, 2.0, 257), [&](Point p) { return u(p * 0.5); });
    TilingOptions a, b;
    a.case_threshold = b.case_threshold = 0.2;
    b.radius = 2.0;
    const auto small_cert = tile_and_certify(u, library_coefficient("sinsin", 1.0 / 16), a);
    const auto big_cert = tile_and_certify(big, library_coefficient("sinsin", 1.0 / 8), b);
    CHECK(big_cert.disjoint_count == small_cert.disjoint_count);
    CHECK(std::abs(big_cert.total_bound / 2.0 - small_cert.total_bound) <= 1e-9);
}

TEST_CASE("tiling preconditions") {
    const ScalarField zero = sampled(129, [](Point) { return 0.0; });
    CHECK_THROWS_AS(tile_and_certify(zero, library_coefficient("sinsin", 0.25)), DegenerateFunctionError);
    const ScalarField x = sampled(129, [](Point p) { return p.x; });
    const auto general = CoefficientField::general([](Point) { return Matrix2{}; }, 1.0, 0.0, "flat");
    CHECK_THROWS_AS(tile_and_certify(x, general), InvalidArgument);
    const ScalarField off = sampled(129, [](Point p) { return p.x + 0.5; });
    CHECK_THROWS_AS(tile_and_certify(off, library_coefficient("sinsin", 0.25)), HypothesisViolation);
}

TEST_CASE("perturbation certificate") {
    const ScalarField u0 = sampled(257, [](Point p) { return p.x; });
    const Ball region({0, 0}, 1.0);
    const auto same = perturbation_certificate(u0, u0, region);
    CHECK(same.eps_observed == 0.0);
    CHECK(same.certified_length > 0.0);

    const ScalarField small = sampled(257, [](Point p) { return p.x + 0.01 * std::cos(p.y); });
    const auto r = perturbation_certificate(small, u0, region);
    CHECK(r.eps_observed == doctest::Approx(0.02).epsilon(0.02));
    CHECK(r.certified_length > 0.0);
    CHECK(r.certified_length <= nodal_length_in(small, region));

    const ScalarField big = sampled(257, [](Point p) { return p.x + 10.0; });
    CHECK(perturbation_certificate(big, u0, region).certified_length == 0.0);

    const ScalarField zero = sampled(257, [](Point) { return 0.0; });
    CHECK_THROWS_AS(perturbation_certificate(u0, zero, region), DegenerateFunctionError);
}
