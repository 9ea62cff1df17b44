#include "nodal/smp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nodal/errors.hpp"
#include "nodal/families.hpp"
#include "nodal/nodal.hpp"

namespace nodal {

std::string to_string(SmpKind k) { return k == SmpKind::SMP ? "SMP" : "WSMP"; }

namespace {

// Extremum test on one ball: interior nodes are those deeper than 2h.
std::optional<SmpViolation> probe_ball(const ScalarField& u, const Ball& b, double tol) {
    const double band = 2.0 * u.grid().spacing();
    double bmax = -std::numeric_limits<double>::infinity(), bmin = std::numeric_limits<double>::infinity();
    double imax = bmax, imin = bmin;
    Point pmax{}, pmin{};
    int interior = 0;
    for_each_node_in(u.grid(), b, [&](int i, int j, Point p) {
        const double v = u.at(i, j);
        if (distance(p, b.center) > b.radius - band) {
            bmax = std::max(bmax, v);
            bmin = std::min(bmin, v);
            return;
        }
        ++interior;
        if (v > imax) {
            imax = v;
            pmax = p;
        }
        if (v < imin) {
            imin = v;
            pmin = p;
        }
    });
    if (interior == 0) return std::nullopt;
    if (imax > bmax + tol) return SmpViolation{b, pmax, imax};
    if (imin < bmin - tol) return SmpViolation{b, pmin, imin};
    return std::nullopt;
}

}  // namespace

SmpCheckReport check_smp(const ScalarField& u, SmpKind kind, int n_balls, double tol, Point center, double radius,
                         std::uint64_t seed) {
    if (kind == SmpKind::SMP && n_balls < 100) throw InvalidArgument("SMP check needs at least 100 balls");
    if (kind == SmpKind::WSMP && n_balls < 32) throw InvalidArgument("WSMP check needs at least 32 balls");
    const Grid& g = u.grid();
    if (!g.contains(Ball(center, radius))) throw DomainError("check domain leaves the grid");

    SmpCheckReport rep{kind, {}, true, g.spacing(), 0};
    for (int k = 1; k <= n_balls; ++k) {
        const Ball b(center, radius * k / n_balls);
        ++rep.balls_checked;
        if (auto v = probe_ball(u, b, tol)) rep.violations.push_back(*v);
    }
    if (kind == SmpKind::SMP) {
        Rng rng(seed);
        const double rmin = 4.0 * g.spacing();
        int drawn = 0;
        while (drawn < n_balls) {
            const Point c{center.x + rng.uniform(-radius, radius), center.y + rng.uniform(-radius, radius)};
            const double room = radius - distance(c, center);
            if (room < rmin) continue;
            ++drawn;
            const Ball b(c, rng.uniform(rmin, room));
            ++rep.balls_checked;
            if (auto v = probe_ball(u, b, tol)) rep.violations.push_back(*v);
        }
    }
    rep.passed = rep.violations.empty();
    return rep;
}

double sign_persistence_radius(const ScalarField& u, Point p, int sign, double r_max) {
    if (!(r_max > 0.0)) throw InvalidArgument("r_max must be positive");
    const double s = sign >= 0 ? 1.0 : -1.0;
    if (!(s * u(p) > 0.0)) throw HypothesisViolation("u does not have the requested sign at p");
    auto ok = [&](double r) { return has_strict_sign(u, Ball(p, r), sign); };
    if (ok(r_max)) return r_max;

    const double floor = u.grid().spacing() / 64.0;
    double hi = r_max, lo = 0.5 * r_max;
    while (!ok(lo)) {
        hi = lo;
        lo *= 0.5;
        if (lo < floor) return 0.0;
    }
    for (int it = 0; it < 40 && hi - lo > floor; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (ok(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

namespace {

struct CircleExtrema {
    double max, min;
    double theta_max, theta_min;
};

CircleExtrema circle_extrema(const ScalarField& u, Point c, double s, int m, double tie) {
    std::vector<double> v(m);
    for (int k = 0; k < m; ++k) {
        const double a = kTwoPi * k / m;
        v[k] = u({c.x + s * std::cos(a), c.y + s * std::sin(a)});
    }
    const double vmax = *std::max_element(v.begin(), v.end());
    const double vmin = *std::min_element(v.begin(), v.end());
    CircleExtrema e{vmax, vmin, -1.0, -1.0};
    // smallest angle among near-ties
    for (int k = 0; k < m; ++k) {
        if (e.theta_max < 0.0 && v[k] >= vmax - tie) e.theta_max = kTwoPi * k / m;
        if (e.theta_min < 0.0 && v[k] <= vmin + tie) e.theta_min = kTwoPi * k / m;
    }
    return e;
}

}  // namespace

SmpCertificate certify_smp_lower_bound(const ScalarField& u, int m_angles, double stop_radius,
                                       const SmpCertifyOptions& opts) {
    if (m_angles < 256) throw InvalidArgument("SMP certificate needs m_angles >= 256");
    if (!(stop_radius > 0.0 && stop_radius < opts.radius)) throw InvalidArgument("stop radius must lie in (0, R)");
    const Grid& g = u.grid();
    const Point c = opts.center;
    if (!g.contains(Ball(c, opts.radius))) throw DomainError("certificate ball leaves the grid");

    const double sup = u.max_abs();
    if (!(sup > 0.0)) throw DegenerateFunctionError("u vanishes identically");
    if (std::abs(u(c)) > opts.zero_tol * sup) throw HypothesisViolation("u(center) != 0");
    const SmpCheckReport pre = check_smp(u, SmpKind::WSMP, opts.wsmp_balls, 1e-9 * sup, c, opts.radius);
    if (!pre.passed) throw HypothesisViolation("WSMP precheck failed");

    const double h = g.spacing();
    SmpCertificate cert;
    cert.m_angles = m_angles;
    cert.stop_radius = stop_radius;
    cert.resolution = h;
    cert.min_shell_width = opts.min_shell_width > 0.0 ? opts.min_shell_width : 0.25 * h;
    cert.s_initial = opts.radius;
    cert.center = c;

    double s = opts.radius;
    const double tie = 1e-9 * sup;
    while (s > stop_radius) {
        const CircleExtrema e = circle_extrema(u, c, s, m_angles, tie);
        if (!(e.max > 0.0 && e.min < 0.0)) {
            cert.diagnostic = "u keeps one sign on the circle s = " + std::to_string(s);
            break;
        }
        const Point xs{c.x + s * std::cos(e.theta_max), c.y + s * std::sin(e.theta_max)};
        const Point ys{c.x + s * std::cos(e.theta_min), c.y + s * std::sin(e.theta_min)};
        const double cap = std::min(0.5 * s, 0.5 * distance(xs, ys));
        const double r_s = std::min({sign_persistence_radius(u, xs, +1, cap), sign_persistence_radius(u, ys, -1, cap)});
        if (r_s < cert.min_shell_width) {
            cert.diagnostic = "sign-persistence radius " + std::to_string(r_s) + " below the minimum shell width at s = " +
                              std::to_string(s);
            break;
        }

        // arc from theta1 counter-clockwise to theta2 and its complement
        const double span = wrap_angle(e.theta_min - e.theta_max);
        const int circles = std::max(8, static_cast<int>(std::ceil(0.5 * r_s / h)));
        bool ok = true;
        for (int j = 1; j <= circles && ok; ++j) {
            const double t = s - j * (0.5 * r_s) / circles;
            bool first = false, second = false;
            for (const auto& w : circle_sign_changes(u, t, m_angles, c)) {
                const double d = wrap_angle(w.angle - e.theta_max);
                if (d > 0.0 && d < span) first = true;
                if (d > span) second = true;
            }
            if (!(first && second)) {
                ok = false;
                cert.diagnostic = "missing zero witness on circle t = " + std::to_string(t);
            }
        }
        if (!ok) break;

        cert.shells.push_back({s, xs, ys, r_s, e.theta_max, e.theta_min, circles, r_s});
        s -= 0.5 * r_s;
    }
    cert.s_final = s;
    cert.completed = s <= stop_radius;
    double credits = 0.0;
    for (const auto& sh : cert.shells) credits += sh.credit;
    cert.certified_lower_bound = credits;
    return cert;
}

std::vector<WsmpRow> wsmp_infimum_experiment(const std::vector<NamedField>& family, int m_angles, double stop_radius) {
    std::vector<WsmpRow> rows;
    const Ball unit({0.0, 0.0}, 1.0);
    for (const auto& member : family) {
        WsmpRow row{member.id, false, 0.0, 0.0, ""};
        try {
            const double sup = member.field.max_abs();
            if (std::abs(member.field({0.0, 0.0})) > 1e-9 * sup) throw HypothesisViolation("u(0) != 0");
            if (!check_smp(member.field, SmpKind::WSMP, 32, 1e-9 * sup).passed)
                throw HypothesisViolation("WSMP precheck failed");
            row.precheck_passed = true;
            row.measured_length = nodal_length_in(member.field, unit);
            const SmpCertificate cert = certify_smp_lower_bound(member.field, m_angles, stop_radius);
            row.certified_bound = cert.certified_lower_bound;
            row.diagnostic = cert.diagnostic;
        } catch (const Error& err) {
            row.diagnostic = err.what();
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace nodal
