#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nodal/geometry.hpp"

namespace nodal {

/// Scalar function sampled on a Grid, evaluated off-node by bilinear
/// interpolation. Values are finite; the field is immutable once built.
class ScalarField {
public:
    ScalarField(Grid grid, std::vector<double> values);

    static ScalarField sample(const Grid& grid, const std::function<double(Point)>& f);

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double at(int i, int j) const { return values_[grid_.index(i, j)]; }

    /// Bilinear interpolant; throws DomainError outside the grid square.
    double operator()(Point p) const;

    /// Affine transform a*u + b on the same grid.
    ScalarField affine(double a, double b) const;

    double max_abs() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// min of sign * u over the corners of every grid cell meeting the ball
/// (cells outside the grid are ignored). A positive result means the
/// bilinear interpolant has the strict sign `sign` on the whole ball.
double signed_margin(const ScalarField& u, const Ball& ball, int sign);

inline bool has_strict_sign(const ScalarField& u, const Ball& ball, int sign) {
    return signed_margin(u, ball, sign) > 0.0;
}

/// Pointwise difference u - v; grids must match.
ScalarField difference(const ScalarField& u, const ScalarField& v);

}  // namespace nodal
