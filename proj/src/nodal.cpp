#include "nodal/nodal.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <unordered_set>

#include "nodal/errors.hpp"

namespace nodal {

namespace {

bool positive(double v) { return v >= 0.0; }

Point crossing(Point a, Point b, double va, double vb) {
    const double t = va / (va - vb);
    return a + (b - a) * t;
}

void push(NodalSet& z, Point a, Point b) {
    Segment s{a, b};
    const double len = s.length();
    if (len <= 0.0) return;
    z.segments.push_back(s);
    z.total_length += len;
}

}  // namespace

NodalSet extract_nodal_set(const ScalarField& u) {
    const Grid& g = u.grid();
    NodalSet z;
    z.resolution = g.spacing();
    const int n = g.n();

    for (int j = 0; j + 1 < n; ++j) {
        for (int i = 0; i + 1 < n; ++i) {
            // corners counter-clockwise from (i, j)
            const std::array<Point, 4> p{g.node(i, j), g.node(i + 1, j), g.node(i + 1, j + 1), g.node(i, j + 1)};
            const std::array<double, 4> v{u.at(i, j), u.at(i + 1, j), u.at(i + 1, j + 1), u.at(i, j + 1)};
            // edge e joins corner e and corner e+1
            std::array<bool, 4> cut{};
            std::array<Point, 4> x{};
            int cuts = 0;
            for (int e = 0; e < 4; ++e) {
                const int a = e, b = (e + 1) % 4;
                if (positive(v[a]) != positive(v[b])) {
                    cut[e] = true;
                    x[e] = crossing(p[a], p[b], v[a], v[b]);
                    ++cuts;
                }
            }
            if (cuts == 0) continue;
            if (cuts == 2) {
                int first = -1;
                for (int e = 0; e < 4; ++e) {
                    if (!cut[e]) continue;
                    if (first < 0) {
                        first = e;
                    } else {
                        push(z, x[first], x[e]);
                    }
                }
                continue;
            }
            // saddle: v[0], v[2] share a sign class, v[1], v[3] the other
            const double den = v[0] - v[1] + v[2] - v[3];
            const double saddle = (v[0] * v[2] - v[1] * v[3]) / den;
            // rounding floor of the saddle value; below it the lines cross
            const double noise =
                8.0 * std::numeric_limits<double>::epsilon() * (std::abs(v[0] * v[2]) + std::abs(v[1] * v[3])) /
                std::abs(den);
            if (std::abs(saddle) <= noise) {
                const double s = (v[0] - v[3]) / den, t = (v[0] - v[1]) / den;
                const Point c{p[0].x + s * (p[1].x - p[0].x), p[0].y + t * (p[3].y - p[0].y)};
                for (int e = 0; e < 4; ++e) push(z, c, x[e]);
            } else if (positive(saddle) == positive(v[0])) {
                // corners 0 and 2 connected: isolate corners 1 and 3
                push(z, x[0], x[1]);
                push(z, x[2], x[3]);
            } else {
                push(z, x[3], x[0]);
                push(z, x[1], x[2]);
            }
        }
    }
    return z;
}

double clipped_length(const Segment& seg, Point center, double radius) {
    const Point d = seg.b - seg.a;
    const Point f = seg.a - center;
    const double A = d.x * d.x + d.y * d.y;
    if (A == 0.0) return 0.0;
    const double B = 2.0 * (f.x * d.x + f.y * d.y);
    const double C = f.x * f.x + f.y * f.y - radius * radius;
    const double disc = B * B - 4.0 * A * C;
    if (disc <= 0.0) return 0.0;
    const double sq = std::sqrt(disc);
    // numerically stable roots
    const double q = -0.5 * (B + std::copysign(sq, B));
    double t0 = q / A, t1 = (q != 0.0) ? C / q : -t0;
    if (t0 > t1) std::swap(t0, t1);
    const double lo = std::max(0.0, t0), hi = std::min(1.0, t1);
    return hi > lo ? (hi - lo) * std::sqrt(A) : 0.0;
}

double nodal_length_in(const NodalSet& z, const Ball& region) {
    double sum = 0.0;
    for (const auto& s : z.segments) sum += clipped_length(s, region.center, region.radius);
    return sum;
}

double nodal_length_in(const NodalSet& z, const Annulus& region) {
    double sum = 0.0;
    for (const auto& s : z.segments) {
        double len = clipped_length(s, region.center, region.outer);
        if (region.inner > 0.0) len -= clipped_length(s, region.center, region.inner);
        sum += len;
    }
    return sum;
}

double nodal_length_in(const ScalarField& u, const Ball& region) {
    if (!u.grid().contains(region)) throw DomainError("region leaves the grid");
    return nodal_length_in(extract_nodal_set(u), region);
}

double nodal_length_in(const ScalarField& u, const Annulus& region) {
    if (!u.grid().contains(Ball(region.center, region.outer))) throw DomainError("region leaves the grid");
    return nodal_length_in(extract_nodal_set(u), region);
}

long box_count(const NodalSet& z, const Ball& region, double box_size, double rotation) {
    const double cr = std::cos(rotation), sr = std::sin(rotation);
    auto local = [&](Point p) {
        const Point q = p - region.center;
        return Point{cr * q.x + sr * q.y, -sr * q.x + cr * q.y};
    };
    auto key = [](long ix, long iy) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
               static_cast<std::uint32_t>(iy);
    };
    std::unordered_set<std::uint64_t> boxes;
    constexpr double kInf = std::numeric_limits<double>::infinity();

    for (const auto& s : z.segments) {
        // clip to the disk first
        const Point d = s.b - s.a;
        const double len = s.length();
        const double inside = clipped_length(s, region.center, region.radius);
        if (inside <= 0.0) continue;
        const Point f = s.a - region.center;
        const double A = d.x * d.x + d.y * d.y;
        const double B = 2.0 * (f.x * d.x + f.y * d.y);
        const double C = f.x * f.x + f.y * f.y - region.radius * region.radius;
        const double sq = std::sqrt(std::max(0.0, B * B - 4.0 * A * C));
        const double lo = std::max(0.0, (-B - sq) / (2.0 * A));
        const double hi = std::min(1.0, lo + inside / len);

        const Point p0 = local(s.a + d * lo), p1 = local(s.a + d * hi);
        long ix = static_cast<long>(std::floor(p0.x / box_size)), iy = static_cast<long>(std::floor(p0.y / box_size));
        const long ex = static_cast<long>(std::floor(p1.x / box_size)),
                   ey = static_cast<long>(std::floor(p1.y / box_size));
        const double dx = p1.x - p0.x, dy = p1.y - p0.y;
        const int sx = dx > 0 ? 1 : (dx < 0 ? -1 : 0), sy = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
        double tx = sx != 0 ? (((sx > 0 ? ix + 1 : ix) * box_size) - p0.x) / dx : kInf;
        double ty = sy != 0 ? (((sy > 0 ? iy + 1 : iy) * box_size) - p0.y) / dy : kInf;
        const double dtx = sx != 0 ? box_size / std::abs(dx) : kInf, dty = sy != 0 ? box_size / std::abs(dy) : kInf;
        // Amanatides-Woo traversal
        for (int guard = 0; guard < 1 << 20; ++guard) {
            boxes.insert(key(ix, iy));
            if (ix == ex && iy == ey) break;
            if (tx < ty) {
                if (tx > 1.0) break;
                ix += sx;
                tx += dtx;
            } else {
                if (ty > 1.0) break;
                iy += sy;
                ty += dty;
            }
        }
    }
    return static_cast<long>(boxes.size());
}

double box_counting_length(const ScalarField& u, const Ball& region, double box_size, int rotations) {
    const double h = u.grid().spacing();
    if (box_size < 2.0 * h) throw ResolutionError("box size must be at least 2h");
    if (rotations < 1) throw InvalidArgument("need at least one lattice orientation");
    if (!u.grid().contains(region)) throw DomainError("region leaves the grid");
    const NodalSet z = extract_nodal_set(u);
    double mean = 0.0;
    for (int k = 0; k < rotations; ++k) mean += box_count(z, region, box_size, 0.5 * kPi * k / rotations);
    mean /= rotations;
    return 0.25 * kPi * box_size * mean;
}

std::vector<CircleZeroWitness> circle_sign_changes(const ScalarField& u, double radius, int m, Point center) {
    if (m < 64) throw InvalidArgument("circle sign changes need m >= 64");
    if (!u.grid().contains(Ball(center, radius))) throw DomainError("circle leaves the grid");
    auto value = [&](double a) { return u({center.x + radius * std::cos(a), center.y + radius * std::sin(a)}); };

    std::vector<double> v(m);
    for (int k = 0; k < m; ++k) v[k] = value(kTwoPi * k / m);

    std::vector<CircleZeroWitness> out;
    for (int k = 0; k < m; ++k) {
        const bool s0 = positive(v[k]);
        if (s0 == positive(v[(k + 1) % m])) continue;
        double lo = kTwoPi * k / m, hi = kTwoPi * (k + 1) / m;
        while (hi - lo > 1e-6) {
            const double mid = 0.5 * (lo + hi);
            if (positive(value(mid)) == s0)
                lo = mid;
            else
                hi = mid;
        }
        out.push_back({radius, 0.5 * (lo + hi), lo, hi});
    }
    return out;
}

void write_nodal_csv(const NodalSet& z, std::ostream& os) {
    os << "x1,y1,x2,y2\n" << std::setprecision(17);
    for (const auto& s : z.segments) os << s.a.x << ',' << s.a.y << ',' << s.b.x << ',' << s.b.y << '\n';
}

}  // namespace nodal
