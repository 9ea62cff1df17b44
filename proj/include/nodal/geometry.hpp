#pragma once

#include <cmath>
#include <vector>

namespace nodal {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Point {
    double x = 0.0;
    double y = 0.0;

    constexpr Point operator+(Point o) const { return {x + o.x, y + o.y}; }
    constexpr Point operator-(Point o) const { return {x - o.x, y - o.y}; }
    constexpr Point operator*(double s) const { return {x * s, y * s}; }
    constexpr bool operator==(const Point&) const = default;
    double norm() const { return std::hypot(x, y); }
};

inline double distance(Point a, Point b) { return (a - b).norm(); }

/// Closed ball B(center, radius).
struct Ball {
    Point center;
    double radius;

    Ball(Point c, double r);
    bool contains(Point p) const { return distance(p, center) <= radius; }
};

/// Closed annulus {inner <= |x - center| <= outer}.
struct Annulus {
    Point center;
    double inner;
    double outer;

    Annulus(Point c, double in, double out);
    bool contains(Point p) const {
        double d = distance(p, center);
        return d >= inner && d <= outer;
    }
};

/// Uniform n x n node grid covering the closed square
/// [center - half_width, center + half_width]^2. Node (i, j) sits at
/// x = lower.x + i*h, y = lower.y + j*h; storage is row-major in j.
class Grid {
public:
    Grid(Point center, double half_width, int n);

    Point center() const { return center_; }
    double half_width() const { return half_width_; }
    int n() const { return n_; }
    double spacing() const { return h_; }
    Point lower() const { return {center_.x - half_width_, center_.y - half_width_}; }
    Point upper() const { return {center_.x + half_width_, center_.y + half_width_}; }

    double x(int i) const { return center_.x - half_width_ + i * h_; }
    double y(int j) const { return center_.y - half_width_ + j * h_; }
    Point node(int i, int j) const { return {x(i), y(j)}; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n_ + i; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }

    /// True when p lies in the square shrunk by `margin` (with a rounding slack).
    bool contains(Point p, double margin = 0.0) const;
    bool contains(const Ball& b, double margin = 0.0) const;

    bool operator==(const Grid&) const = default;

private:
    Point center_;
    double half_width_;
    int n_;
    double h_;
};

/// Inclusive node index window [i0, i1] x [j0, j1] covering a ball, clamped
/// to the grid.
struct NodeWindow {
    int i0, i1, j0, j1;
};
NodeWindow node_window(const Grid& g, Point center, double radius);

/// Calls f(i, j, point) for every node with |point - ball.center| <= radius,
/// nodes on the circle counted in despite rounding.
template <class F>
void for_each_node_in(const Grid& g, const Ball& b, F&& f) {
    NodeWindow w = node_window(g, b.center, b.radius);
    const double r2 = b.radius * b.radius * (1.0 + 1e-12);
    for (int j = w.j0; j <= w.j1; ++j) {
        for (int i = w.i0; i <= w.i1; ++i) {
            Point p = g.node(i, j);
            double dx = p.x - b.center.x, dy = p.y - b.center.y;
            if (dx * dx + dy * dy <= r2) f(i, j, p);
        }
    }
}

struct CirclePoint {
    double angle;
    Point point;
};

/// m equally spaced points on the circle, angles ascending in [0, 2*pi).
std::vector<CirclePoint> sample_circle(Point center, double radius, int m);

/// k + 1 equally spaced radii from inner to outer; endpoints are exact.
std::vector<double> annulus_radii(double inner, double outer, int k);

/// Angle of p - center in [0, 2*pi).
double polar_angle(Point p, Point center = {});

/// Wraps an angle into [0, 2*pi).
double wrap_angle(double a);

}  // namespace nodal
