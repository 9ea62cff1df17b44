#include <doctest.h>

#include <cmath>

#include "nodal/errors.hpp"
#include "nodal/families.hpp"
#include "nodal/nodal.hpp"
#include "nodal/smp.hpp"

using namespace nodal;

namespace {

ScalarField sampled(int n, const std::function<double(Point)>& f) { return ScalarField::sample(Grid({0, 0}, 1.0, n), f); }

}  // namespace

TEST_CASE("maximum principle checks") {
    const ScalarField x = sampled(129, [](Point p) { return p.x; });
    CHECK(check_smp(x, SmpKind::WSMP, 32).passed);
    const auto smp = check_smp(x, SmpKind::SMP, 100);
    CHECK(smp.passed);
    CHECK(smp.balls_checked >= 200);
    CHECK(smp.resolution == doctest::Approx(1.0 / 64));

    const ScalarField bump = sampled(129, [](Point p) { return 1.0 - p.x * p.x - p.y * p.y; });
    const auto w = check_smp(bump, SmpKind::WSMP, 32);
    CHECK_FALSE(w.passed);
    REQUIRE_FALSE(w.violations.empty());
    CHECK(std::hypot(w.violations[0].point.x, w.violations[0].point.y) < 0.05);
    CHECK_FALSE(check_smp(bump, SmpKind::SMP, 100).passed);

    CHECK_THROWS_AS(check_smp(x, SmpKind::SMP, 50), InvalidArgument);
    CHECK_THROWS_AS(check_smp(x, SmpKind::WSMP, 8), InvalidArgument);
    CHECK(to_string(SmpKind::WSMP) == "WSMP");
}

TEST_CASE("sign persistence radius") {
    const ScalarField x = sampled(257, [](Point p) { return p.x; });
    const double h = x.grid().spacing();
    CHECK(sign_persistence_radius(x, {0.5, 0.0}, +1, 0.2) == 0.2);
    const double r = sign_persistence_radius(x, {0.3, 0.0}, +1, 0.6);
    // cells touching the ball must stay positive, so r sits within a cell of 0.3
    CHECK(r <= 0.3);
    CHECK(r >= 0.3 - 2 * h);
    CHECK(has_strict_sign(x, Ball({0.3, 0.0}, r), +1));
    CHECK_THROWS_AS(sign_persistence_radius(x, {-0.3, 0.0}, +1, 0.2), HypothesisViolation);
    CHECK(sign_persistence_radius(x, {0.001, 0.0}, +1, 0.2) == 0.0);
}

TEST_CASE("shell certificate for x1") {
    const ScalarField x = sampled(257, [](Point p) { return p.x; });
    const auto cert = certify_smp_lower_bound(x, 1024, 0.004);
    // the descent ends at the shell width floor before the stop radius
    CHECK(cert.completed == cert.diagnostic.empty());
    CHECK(cert.s_final < 0.02);
    CHECK(cert.certified_lower_bound >= 1.95);
    CHECK(cert.certified_lower_bound <= 2.0);
    CHECK(cert.certified_lower_bound == doctest::Approx(2 * (cert.s_initial - cert.s_final)));
    double sum = 0.0;
    for (const auto& s : cert.shells) {
        sum += s.credit;
        CHECK(s.circles_checked >= 8);
        CHECK(s.x_s.x > 0.0);
        CHECK(s.y_s.x < 0.0);
    }
    CHECK(sum == doctest::Approx(cert.certified_lower_bound));
    CHECK(cert.certified_lower_bound <= nodal_length_in(x, Ball({0, 0}, 1.0)) + 1e-12);
}

TEST_CASE("shell certificate on random harmonics is sound") {
    for (const auto& p : random_harmonic_family(5)) {
        CAPTURE(p.id);
        const ScalarField u = sampled(257, p);
        const auto cert = certify_smp_lower_bound(u, 256, 0.01);
        CHECK(cert.certified_lower_bound > 1.0);
        CHECK(cert.certified_lower_bound <= nodal_length_in(u, Ball({0, 0}, 1.0)) + 0.02);
    }
}

TEST_CASE("shell certificate preconditions") {
    const ScalarField x = sampled(129, [](Point p) { return p.x; });
    CHECK_THROWS_AS(certify_smp_lower_bound(x, 128, 0.01), InvalidArgument);
    CHECK_THROWS_AS(certify_smp_lower_bound(x, 256, 1.5), InvalidArgument);
    CHECK_THROWS_AS(certify_smp_lower_bound(x, 256, 0.0), InvalidArgument);
    const ScalarField shifted = sampled(129, [](Point p) { return p.x + 0.2; });
    CHECK_THROWS_AS(certify_smp_lower_bound(shifted, 256, 0.01), HypothesisViolation);
    const ScalarField bump = sampled(129, [](Point p) { return p.x * p.x + p.y * p.y - 0.0; });
    CHECK_THROWS(certify_smp_lower_bound(bump, 256, 0.01));
}

TEST_CASE("WSMP family experiment skips failing members") {
    std::vector<NamedField> family;
    family.push_back({"x1", sampled(129, [](Point p) { return p.x; })});
    family.push_back({"bump", sampled(129, [](Point p) { return 1.0 - p.x * p.x - p.y * p.y; })});
    family.push_back({"offset", sampled(129, [](Point p) { return p.y + 0.3; })});
    const auto rows = wsmp_infimum_experiment(family);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].precheck_passed);
    CHECK(rows[0].certified_bound > 1.9);
    CHECK(rows[0].measured_length == doctest::Approx(2.0));
    CHECK_FALSE(rows[1].precheck_passed);
    CHECK_FALSE(rows[1].diagnostic.empty());
    CHECK(rows[2].certified_bound == 0.0);
    CHECK_FALSE(rows[2].diagnostic.empty());
}

TEST_CASE("shell certificate on Re z^2 claims only 2") {
    const ScalarField u = sampled(257, homogeneous_harmonic(2));
    const auto cert = certify_smp_lower_bound(u, 1024, 0.01);
    CHECK(cert.certified_lower_bound >= 1.96);
    CHECK(cert.certified_lower_bound <= 2.0);
    CHECK(nodal_length_in(u, Ball({0, 0}, 1.0)) == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("shell certificate improves under refinement") {
    double prev = 0.0;
    for (int n : {129, 257, 513}) {
        CAPTURE(n);
        const ScalarField x = sampled(n, [](Point p) { return p.x; });
        const double b = certify_smp_lower_bound(x, 1024, 0.01).certified_lower_bound;
        CHECK(b >= prev - 1e-3);
        CHECK(b <= 2.0);
        prev = b;
    }
    CHECK(prev >= 1.98);
}
