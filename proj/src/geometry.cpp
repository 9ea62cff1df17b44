#include "nodal/geometry.hpp"

#include <algorithm>
#include <string>

#include "nodal/errors.hpp"

namespace nodal {

Ball::Ball(Point c, double r) : center(c), radius(r) {
    if (!(r > 0.0)) throw InvalidArgument("ball radius must be positive, got " + std::to_string(r));
}

Annulus::Annulus(Point c, double in, double out) : center(c), inner(in), outer(out) {
    if (!(in >= 0.0 && in < out))
        throw InvalidArgument("annulus needs 0 <= inner < outer, got [" + std::to_string(in) + ", " +
                              std::to_string(out) + "]");
}

Grid::Grid(Point center, double half_width, int n) : center_(center), half_width_(half_width), n_(n) {
    if (n < 16) throw InvalidArgument("grid needs at least 16 points per side, got " + std::to_string(n));
    if (!(half_width > 0.0)) throw InvalidArgument("grid half width must be positive");
    h_ = 2.0 * half_width / (n - 1);
}

bool Grid::contains(Point p, double margin) const {
    const double slack = 1e-12 * half_width_;
    const double lim = half_width_ - margin + slack;
    return std::abs(p.x - center_.x) <= lim && std::abs(p.y - center_.y) <= lim;
}

bool Grid::contains(const Ball& b, double margin) const {
    const double slack = 1e-12 * half_width_;
    const double lim = half_width_ - margin - b.radius + slack;
    return std::abs(b.center.x - center_.x) <= lim && std::abs(b.center.y - center_.y) <= lim;
}

NodeWindow node_window(const Grid& g, Point center, double radius) {
    const double h = g.spacing();
    const Point lo = g.lower();
    auto clamp = [&](double v) { return std::clamp(static_cast<int>(v), 0, g.n() - 1); };
    return {clamp(std::floor((center.x - radius - lo.x) / h)), clamp(std::ceil((center.x + radius - lo.x) / h)),
            clamp(std::floor((center.y - radius - lo.y) / h)), clamp(std::ceil((center.y + radius - lo.y) / h))};
}

std::vector<CirclePoint> sample_circle(Point center, double radius, int m) {
    if (!(radius > 0.0)) throw InvalidArgument("circle radius must be positive");
    if (m < 8) throw InvalidArgument("circle sampling needs m >= 8, got " + std::to_string(m));
    std::vector<CirclePoint> out;
    out.reserve(m);
    for (int k = 0; k < m; ++k) {
        double a = kTwoPi * k / m;
        out.push_back({a, {center.x + radius * std::cos(a), center.y + radius * std::sin(a)}});
    }
    return out;
}

std::vector<double> annulus_radii(double inner, double outer, int k) {
    if (k < 1) throw InvalidArgument("annulus partition needs k >= 1");
    if (!(inner >= 0.0 && inner < outer)) throw InvalidArgument("annulus radii need 0 <= inner < outer");
    std::vector<double> r(k + 1);
    const double step = (outer - inner) / k;
    for (int i = 0; i <= k; ++i) r[i] = inner + i * step;
    r[k] = outer;
    return r;
}

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return a;
}

double polar_angle(Point p, Point center) { return wrap_angle(std::atan2(p.y - center.y, p.x - center.x)); }

}  // namespace nodal
