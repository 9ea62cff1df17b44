#include "nodal/indices.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nodal/errors.hpp"
#include "nodal/solver.hpp"

namespace nodal {

double l2_mass(const ScalarField& u, const Ball& ball, int subdivisions) {
    const Grid& g = u.grid();
    if (!g.contains(ball)) throw DomainError("ball leaves the grid");
    const double h = g.spacing();
    const double r2 = ball.radius * ball.radius;
    const NodeWindow w = node_window(g, ball.center, ball.radius);
    const double sub = h / subdivisions;
    double mass = 0.0;

    for (int j = w.j0; j < w.j1; ++j) {
        for (int i = w.i0; i < w.i1; ++i) {
            const Point lo = g.node(i, j);
            // nearest and farthest points of the cell from the centre
            const double nx = std::clamp(ball.center.x, lo.x, lo.x + h) - ball.center.x;
            const double ny = std::clamp(ball.center.y, lo.y, lo.y + h) - ball.center.y;
            if (nx * nx + ny * ny > r2) continue;
            const double fx = std::max(std::abs(lo.x - ball.center.x), std::abs(lo.x + h - ball.center.x));
            const double fy = std::max(std::abs(lo.y - ball.center.y), std::abs(lo.y + h - ball.center.y));
            const double v00 = u.at(i, j), v10 = u.at(i + 1, j), v01 = u.at(i, j + 1), v11 = u.at(i + 1, j + 1);
            if (fx * fx + fy * fy <= r2) {
                const double mid = 0.25 * (v00 + v10 + v01 + v11);
                mass += mid * mid * h * h;
                continue;
            }
            for (int b = 0; b < subdivisions; ++b) {
                for (int a = 0; a < subdivisions; ++a) {
                    const double tx = (a + 0.5) / subdivisions, ty = (b + 0.5) / subdivisions;
                    const double px = lo.x + tx * h - ball.center.x, py = lo.y + ty * h - ball.center.y;
                    if (px * px + py * py > r2) continue;
                    const double val = (1 - ty) * ((1 - tx) * v00 + tx * v10) + ty * ((1 - tx) * v01 + tx * v11);
                    mass += val * val * sub * sub;
                }
            }
        }
    }
    return mass;
}

double doubling_index_l2(const ScalarField& u, Point center, double r) {
    const double outer = l2_mass(u, Ball(center, r));
    const double inner = l2_mass(u, Ball(center, 0.5 * r));
    if (!(inner > 0.0)) throw DegenerateFunctionError("u vanishes on the inner ball");
    return std::log2(outer / inner);
}

NodeExtrema node_extrema(const ScalarField& u, const Ball& ball) {
    NodeExtrema e{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0.0, {}, {}, 0};
    for_each_node_in(u.grid(), ball, [&](int i, int j, Point p) {
        const double v = u.at(i, j);
        if (v > e.max) {
            e.max = v;
            e.argmax = p;
        }
        if (v < e.min) {
            e.min = v;
            e.argmin = p;
        }
        e.max_abs = std::max(e.max_abs, std::abs(v));
        ++e.count;
    });
    return e;
}

double interpolant_sup_abs(const ScalarField& u, const Ball& ball, int circle_samples) {
    // a bilinear cell has no interior extremum, so the sup sits on a node or the circle
    double s = node_extrema(u, ball).max_abs;
    for (const auto& c : sample_circle(ball.center, ball.radius, circle_samples)) s = std::max(s, std::abs(u(c.point)));
    return s;
}

double doubling_index_sup(const ScalarField& u, Point center, double r_outer, double r_inner) {
    if (!(r_inner > 0.0 && r_inner < r_outer)) throw InvalidArgument("need 0 < r_inner < r_outer");
    const Ball outer(center, r_outer);
    if (!u.grid().contains(outer)) throw DomainError("ball leaves the grid");
    const double so = interpolant_sup_abs(u, outer);
    const double si = interpolant_sup_abs(u, Ball(center, r_inner));
    if (!(si > 0.0)) throw DegenerateFunctionError("u vanishes on the inner ball");
    return std::log2(so / si);
}

HarnackRecord harnack_ratio(const ScalarField& u, const Ball& ball) {
    if (!u.grid().contains(ball)) throw DomainError("ball leaves the grid");
    const NodeExtrema e = node_extrema(u, ball);
    if (e.count == 0) throw DomainError("ball contains no grid nodes");
    if (!(e.min > 0.0))
        throw PositivityViolation("u = " + std::to_string(e.min) + " at (" + std::to_string(e.argmin.x) + ", " +
                                  std::to_string(e.argmin.y) + ")");
    const double smaller = node_extrema(u, Ball(ball.center, 0.8 * ball.radius)).max_abs;
    return {ball, e.max, e.min, smaller, e.max / e.min};
}

HarnackTypeValues harnack_type_check(const ScalarField& u, Point center, double radius) {
    if (!u.grid().contains(Ball(center, radius))) throw DomainError("ball leaves the grid");
    if (u(center) < 0.0) throw HypothesisViolation("u(center) < 0");
    const NodeExtrema half = node_extrema(u, Ball(center, 0.5 * radius));
    const NodeExtrema twofifths = node_extrema(u, Ball(center, 0.4 * radius));
    return {half.max, twofifths.max_abs};
}

ApproximationError approximation_error(const ScalarField& u_eps, const Ball& ball) {
    const Grid& g = u_eps.grid();
    const Ball twice(ball.center, 2.0 * ball.radius);
    if (!g.contains(twice, 2.0 * g.spacing())) throw DomainError("2x ball does not fit in the grid");
    const double mean_sq = l2_mass(u_eps, twice) / (kPi * twice.radius * twice.radius);
    if (!(mean_sq > 0.0)) throw DegenerateFunctionError("u vanishes on the doubled ball");

    const ScalarField w = harmonic_extension(u_eps, twice);
    double err = 0.0;
    for_each_node_in(g, ball, [&](int i, int j, Point) { err = std::max(err, std::abs(u_eps.at(i, j) - w.at(i, j))); });
    return {err / std::sqrt(mean_sq), doubling_index_l2(w, ball.center, ball.radius)};
}

GradientBound gradient_bound_check(const ScalarField& u, const Ball& ball) {
    const Grid& g = u.grid();
    if (!g.contains(ball, 2.0 * g.spacing())) throw DomainError("ball does not fit in the grid with a 2h margin");
    const double h = g.spacing();
    GradientBound out{0.0, node_extrema(u, ball).max_abs};
    for_each_node_in(g, Ball(ball.center, 0.5 * ball.radius), [&](int i, int j, Point) {
        const double gx = (u.at(i + 1, j) - u.at(i - 1, j)) / (2.0 * h);
        const double gy = (u.at(i, j + 1) - u.at(i, j - 1)) / (2.0 * h);
        out.sup_grad_inner = std::max(out.sup_grad_inner, std::hypot(gx, gy));
    });
    return out;
}

}  // namespace nodal
