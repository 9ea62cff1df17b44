#include "nodal/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "nodal/errors.hpp"
#include "nodal/indices.hpp"

namespace nodal {

std::vector<int> AnnulusDecomposition::good_both() const {
    std::vector<int> out;
    std::set_intersection(good_plus.begin(), good_plus.end(), good_minus.begin(), good_minus.end(),
                          std::back_inserter(out));
    return out;
}

double AnnulusDecomposition::growth_exponent() const {
    return std::log2(std::max(M.back() / M.front(), m.back() / m.front()));
}

namespace {

struct Extremes {
    double max, min;
};

Extremes ball_extremes(const ScalarField& u, Point c, double r) {
    const NodeExtrema e = node_extrema(u, Ball(c, r));
    if (e.count == 0) throw ResolutionError("no grid node inside B(c, " + std::to_string(r) + ")");
    if (!(e.max > 0.0 && e.min < 0.0))
        throw HypothesisViolation("u keeps one sign on B(c, " + std::to_string(r) + ")");
    return {e.max, e.min};
}

}  // namespace

int auto_annulus_count(const ScalarField& u, Point center, double inner, double outer, double S) {
    if (!(S > 1.0)) throw InvalidArgument("S must exceed 1");
    const Extremes lo = ball_extremes(u, center, inner), hi = ball_extremes(u, center, outer);
    const double n = std::log2(std::max(hi.max / lo.max, hi.min / lo.min));
    const int bad = std::max(1, static_cast<int>(std::ceil(n / std::log2(S) - 1e-12)));
    return 3 * bad;
}

AnnulusDecomposition decompose_annuli(const ScalarField& u, Point center, double inner, double outer, int k,
                                      double S, double zero_tol) {
    if (!(S > 1.0)) throw InvalidArgument("S must exceed 1");
    if (!(inner > 0.0 && inner < outer)) throw InvalidArgument("need 0 < inner < outer");
    if (!u.grid().contains(Ball(center, outer))) throw DomainError("outer ball leaves the grid");
    const double sup = node_extrema(u, Ball(center, outer)).max_abs;
    if (!(sup > 0.0)) throw DegenerateFunctionError("u vanishes on the outer ball");
    if (std::abs(u(center)) > zero_tol * sup) throw HypothesisViolation("u(center) != 0");
    if (k <= 0) k = auto_annulus_count(u, center, inner, outer, S);
    if (k < 3) throw InvalidArgument("need k >= 3 annuli");

    AnnulusDecomposition dec;
    dec.center = center;
    dec.S = S;
    dec.radii = annulus_radii(inner, outer, k);
    for (double r : dec.radii) {
        const Extremes e = ball_extremes(u, center, r);
        dec.M.push_back(e.max);
        dec.m.push_back(e.min);
    }
    for (int i = 0; i < k; ++i) {
        if (dec.M[i + 1] <= S * dec.M[i]) dec.good_plus.push_back(i);
        if (-dec.m[i + 1] <= -S * dec.m[i]) dec.good_minus.push_back(i);
    }
    dec.k_plus = static_cast<int>(dec.good_plus.size());
    dec.k_minus = static_cast<int>(dec.good_minus.size());
    return dec;
}

bool chain_inequality_holds(const AnnulusDecomposition& dec) {
    const double slack = 1.0 + 1e-12;
    const int k = dec.k();
    return std::pow(dec.S, k - dec.k_plus) <= slack * dec.M[k] / dec.M[0] &&
           std::pow(dec.S, k - dec.k_minus) <= slack * dec.m[k] / dec.m[0];
}

namespace {

constexpr int kCircleSamples = 1024;

bool ball_fits(const AnnulusDecomposition& dec, const Ball& b) {
    return b.radius < dec.width();
}

}  // namespace

std::vector<SignDefiniteBall> locate_sign_definite_balls(const ScalarField& u, const AnnulusDecomposition& dec,
                                                         double ball_radius) {
    if (ball_radius < 4.0 * u.grid().spacing() * (1.0 - 1e-12))
        throw InvalidArgument("ball radius must be at least 4h");
    std::vector<SignDefiniteBall> out;
    for (int i : dec.good_both()) {
        const double r = dec.radii[i];
        double vmax = -std::numeric_limits<double>::infinity(), vmin = std::numeric_limits<double>::infinity();
        Point pmax{}, pmin{};
        for (const auto& s : sample_circle(dec.center, r, kCircleSamples)) {
            const double v = u(s.point);
            if (v > vmax) {
                vmax = v;
                pmax = s.point;
            }
            if (v < vmin) {
                vmin = v;
                pmin = s.point;
            }
        }
        for (auto [p, sign] : {std::pair{pmax, +1}, std::pair{pmin, -1}}) {
            const Ball b(p, ball_radius);
            if (!ball_fits(dec, b) || !u.grid().contains(b)) continue;
            if (has_strict_sign(u, b, sign)) out.push_back({b, sign, i});
        }
    }
    return out;
}

double certified_length_from_decomposition(const ScalarField& u, const AnnulusDecomposition& dec,
                                           const std::vector<SignDefiniteBall>& balls) {
    std::map<int, std::pair<double, double>> best;  // index -> (plus radius, minus radius)
    for (const auto& b : balls) {
        if (b.index < 0 || b.index >= dec.k()) continue;
        if (!ball_fits(dec, b.ball) || !u.grid().contains(b.ball)) continue;
        if (!has_strict_sign(u, b.ball, b.sign)) continue;
        auto& slot = best[b.index];
        double& r = b.sign > 0 ? slot.first : slot.second;
        r = std::max(r, b.ball.radius);
    }
    double total = 0.0;
    for (const auto& [i, radii] : best) {
        const double rho = std::min(radii.first, radii.second);
        if (rho > 0.0) total += std::min(2.0 * rho, dec.width());
    }
    return total;
}

namespace {

// Zero of u on the boundary of the square of half-side a around c that is
// closest to c, found by bisection between sign-changing samples.
std::optional<Point> square_zero(const ScalarField& u, Point c, double a) {
    const double h = u.grid().spacing();
    const int per_side = std::max(16, static_cast<int>(std::ceil(4.0 * a / h)));
    const Point corners[4] = {{c.x - a, c.y - a}, {c.x + a, c.y - a}, {c.x + a, c.y + a}, {c.x - a, c.y + a}};
    std::vector<Point> pts;
    pts.reserve(4 * per_side + 1);
    for (int s = 0; s < 4; ++s) {
        const Point p = corners[s], q = corners[(s + 1) % 4];
        for (int k = 0; k < per_side; ++k) pts.push_back(p + (q - p) * (static_cast<double>(k) / per_side));
    }
    pts.push_back(pts.front());

    std::optional<Point> best;
    double best_norm = std::numeric_limits<double>::infinity();
    auto offer = [&](Point z) {
        const double d = distance(z, c);
        if (d < best_norm) {
            best_norm = d;
            best = z;
        }
    };
    double prev = u(pts[0]);
    for (std::size_t k = 1; k < pts.size(); ++k) {
        const double cur = u(pts[k]);
        if (prev == 0.0) {
            offer(pts[k - 1]);
        } else if (prev * cur < 0.0) {
            Point lo = pts[k - 1], hi = pts[k];
            double flo = prev;
            for (int it = 0; it < 60; ++it) {
                const Point mid = (lo + hi) * 0.5;
                const double fm = u(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            offer((lo + hi) * 0.5);
        }
        prev = cur;
    }
    return best;
}

bool square_inside(const Grid& g, Point c, double a) {
    return g.contains(Point{c.x - a, c.y - a}) && g.contains(Point{c.x + a, c.y + a});
}

// Certified length of u near its zero z, on a resampled local grid.
void certify_cube(const ScalarField& u, Point z, double eps, const TilingOptions& opts, TileCube& cube) {
    const double half = 0.5 * eps;
    if (!square_inside(u.grid(), z, half)) {
        cube.diagnostic = "cube neighbourhood leaves the grid";
        return;
    }
    const ScalarField local = ScalarField::sample(Grid(z, half, opts.local_n), [&](Point p) { return u(p); });
    try {
        const AnnulusDecomposition dec = decompose_annuli(local, z, 0.25 * eps, half, 0, opts.S, 1e-6);
        cube.annuli = dec.k();
        cube.good_both = static_cast<int>(dec.good_both().size());
        cube.chain_ok = chain_inequality_holds(dec);
        const double hl = local.grid().spacing();
        for (double rho : {0.5 * dec.width(), 0.25 * dec.width()}) {
            if (rho < 4.0 * hl) break;
            cube.bound = certified_length_from_decomposition(local, dec, locate_sign_definite_balls(local, dec, rho));
            if (cube.bound > 0.0) return;
        }
        cube.diagnostic = "no verified sign-definite pair";
    } catch (const Error& e) {
        cube.diagnostic = e.what();
    }
}

}  // namespace

TilingCertificate tile_and_certify(const ScalarField& u_eps, const CoefficientField& field, const TilingOptions& opts) {
    if (!field.periodic()) throw InvalidArgument("tiling needs a periodic coefficient field");
    const double sup = u_eps.max_abs();
    if (!(sup > 0.0)) throw DegenerateFunctionError("u vanishes identically");
    if (std::abs(u_eps(opts.center)) > 1e-6 * sup) throw HypothesisViolation("u(center) != 0");

    TilingCertificate cert;
    cert.epsilon = field.epsilon();
    cert.radius = opts.radius;
    const double eps = cert.epsilon;
    cert.k = std::max(1, static_cast<int>(std::lround(opts.radius / eps)));
    const Point c = opts.center;

    if (eps / opts.radius > opts.case_threshold) {
        cert.single_ball = true;
        TileCube cube{0, {0.0, 0.0}, 0, 0, true, true, 0.0, ""};
        certify_cube(u_eps, c, eps, opts, cube);
        cert.cubes.push_back(cube);
    } else {
        std::vector<std::pair<int, int>> taken;
        for (int t = 1; t <= cert.k; ++t) {
            TileCube cube{t, {}, 0, 0, false, false, 0.0, ""};
            const double a = t * eps;
            if (!square_inside(u_eps.grid(), c, a)) {
                cube.diagnostic = "square leaves the grid";
                cert.cubes.push_back(cube);
                continue;
            }
            const auto z = square_zero(u_eps, c, a);
            if (!z) {
                cube.diagnostic = "no sign change on the square";
                cert.cubes.push_back(cube);
                continue;
            }
            cube.witness = (*z - c) * (1.0 / eps);
            cube.cx = static_cast<int>(std::lround(cube.witness.x));
            cube.cy = static_cast<int>(std::lround(cube.witness.y));
            cube.admissible = std::hypot(cube.cx, cube.cy) + std::sqrt(2.0) <= cert.k;
            const bool disjoint = std::all_of(taken.begin(), taken.end(), [&](const auto& o) {
                return std::max(std::abs(cube.cx - o.first), std::abs(cube.cy - o.second)) >= 3;
            });
            if (cube.admissible && disjoint) {
                cube.selected = true;
                taken.emplace_back(cube.cx, cube.cy);
                certify_cube(u_eps, *z, eps, opts, cube);
            }
            cert.cubes.push_back(cube);
        }
    }

    double sum = 0.0, lo = std::numeric_limits<double>::infinity();
    for (const auto& cube : cert.cubes) {
        if (!cube.selected) continue;
        ++cert.disjoint_count;
        sum += cube.bound;
        lo = std::min(lo, cube.bound);
    }
    if (cert.disjoint_count > 0) {
        cert.per_cube_bound = sum / cert.disjoint_count;
        cert.min_cube_bound = lo;
    }
    cert.total_bound = sum;
    cert.total_fast = sum / eps;
    return cert;
}

PerturbationResult perturbation_certificate(const ScalarField& u, const ScalarField& u0, const Ball& region) {
    if (!(u.grid() == u0.grid())) throw InvalidArgument("u and u0 live on different grids");
    const double base = node_extrema(u0, Ball(region.center, 0.5 * region.radius)).max_abs;
    if (!(base > 0.0)) throw DegenerateFunctionError("u0 vanishes on the half ball");

    PerturbationResult res;
    res.perturbation_sup = node_extrema(difference(u, u0), region).max_abs;
    res.eps_observed = res.perturbation_sup / base;
    res.decomposition = decompose_annuli(u0, region.center, 0.5 * region.radius, 0.7 * region.radius, 0, 2.0);

    const double width = res.decomposition.width();
    const double rho = std::max(0.5 * width, 4.0 * u0.grid().spacing());
    if (rho >= width) throw ResolutionError("grid too coarse for the annulus width");
    for (const auto& b : locate_sign_definite_balls(u0, res.decomposition, rho))
        if (signed_margin(u0, b.ball, b.sign) > 2.0 * res.perturbation_sup) res.balls.push_back(b);
    res.certified_length = certified_length_from_decomposition(u, res.decomposition, res.balls);
    return res;
}

}  // namespace nodal
