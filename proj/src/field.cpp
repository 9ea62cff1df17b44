#include "nodal/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nodal/errors.hpp"

namespace nodal {

ScalarField::ScalarField(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw InvalidArgument("field has " + std::to_string(values_.size()) + " values for a grid of " +
                              std::to_string(grid_.size()));
    for (double v : values_)
        if (!std::isfinite(v)) throw InvalidArgument("field values must be finite");
}

ScalarField ScalarField::sample(const Grid& grid, const std::function<double(Point)>& f) {
    std::vector<double> v(grid.size());
    for (int j = 0; j < grid.n(); ++j)
        for (int i = 0; i < grid.n(); ++i) v[grid.index(i, j)] = f(grid.node(i, j));
    return ScalarField(grid, std::move(v));
}

double ScalarField::operator()(Point p) const {
    if (!grid_.contains(p)) throw DomainError("point outside the sampling grid");
    const double h = grid_.spacing();
    const Point lo = grid_.lower();
    const int last = grid_.n() - 1;
    const double sx = (p.x - lo.x) / h, sy = (p.y - lo.y) / h;
    const int i = std::clamp(static_cast<int>(std::floor(sx)), 0, last - 1);
    const int j = std::clamp(static_cast<int>(std::floor(sy)), 0, last - 1);
    const double tx = std::clamp(sx - i, 0.0, 1.0), ty = std::clamp(sy - j, 0.0, 1.0);
    const double v00 = at(i, j), v10 = at(i + 1, j), v01 = at(i, j + 1), v11 = at(i + 1, j + 1);
    return (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11);
}

ScalarField ScalarField::affine(double a, double b) const {
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), [&](double x) { return a * x + b; });
    return ScalarField(grid_, std::move(v));
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double signed_margin(const ScalarField& u, const Ball& ball, int sign) {
    const Grid& g = u.grid();
    const double h = g.spacing();
    const Point lo = g.lower();
    const int last_cell = g.n() - 2;
    auto cell_index = [&](double v, double origin) {
        return std::clamp(static_cast<int>(std::floor((v - origin) / h)), 0, last_cell);
    };
    const int i0 = cell_index(ball.center.x - ball.radius, lo.x), i1 = cell_index(ball.center.x + ball.radius, lo.x);
    const int j0 = cell_index(ball.center.y - ball.radius, lo.y), j1 = cell_index(ball.center.y + ball.radius, lo.y);
    const double r2 = ball.radius * ball.radius;
    const double s = sign >= 0 ? 1.0 : -1.0;
    double margin = std::numeric_limits<double>::infinity();
    for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
            const Point c = g.node(i, j);
            const double nx = std::clamp(ball.center.x, c.x, c.x + h) - ball.center.x;
            const double ny = std::clamp(ball.center.y, c.y, c.y + h) - ball.center.y;
            if (nx * nx + ny * ny > r2) continue;
            margin = std::min({margin, s * u.at(i, j), s * u.at(i + 1, j), s * u.at(i, j + 1), s * u.at(i + 1, j + 1)});
        }
    }
    return margin;
}

ScalarField difference(const ScalarField& u, const ScalarField& v) {
    if (!(u.grid() == v.grid())) throw InvalidArgument("fields live on different grids");
    std::vector<double> d(u.values().size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = u.values()[k] - v.values()[k];
    return ScalarField(u.grid(), std::move(d));
}

}  // namespace nodal
