#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "nodal/geometry.hpp"

namespace nodal {

/// Symmetric 2x2 matrix [[a11, a12], [a12, a22]].
struct Matrix2 {
    double a11 = 1.0;
    double a12 = 0.0;
    double a22 = 1.0;

    double quadratic(double xi1, double xi2) const { return a11 * xi1 * xi1 + 2.0 * a12 * xi1 * xi2 + a22 * xi2 * xi2; }
    double max_abs_diff(const Matrix2& o) const;
    bool is_diagonal() const { return a12 == 0.0; }
};

using MatrixFunction = std::function<Matrix2(Point)>;

/// Coefficient map x -> A(x). For periodic fields the stored cell function
/// is 1-periodic and evaluation returns A(x / epsilon).
class CoefficientField {
public:
    /// Non-periodic field evaluated directly at x.
    static CoefficientField general(MatrixFunction entries, double lambda, double lipschitz, std::string name);

    Matrix2 operator()(Point x) const;
    /// The unit-cell function at fast variable y (no rescaling).
    Matrix2 cell(Point y) const { return entries_(y); }

    double lambda() const { return lambda_; }
    /// Lipschitz bound of the unit-cell entries; infinity when unknown.
    double lipschitz() const { return lipschitz_; }
    bool periodic() const { return periodic_; }
    double epsilon() const { return epsilon_; }
    const std::string& name() const { return name_; }
    /// Same cell function, new rescaling parameter.
    CoefficientField rescaled(double epsilon) const;

private:
    friend CoefficientField make_periodic(MatrixFunction, double, double, double, std::string);
    CoefficientField() = default;

    MatrixFunction entries_;
    double lambda_ = 1.0;
    double lipschitz_ = std::numeric_limits<double>::infinity();
    bool periodic_ = false;
    double epsilon_ = 1.0;
    std::string name_;
};

/// Builds the rescaled periodic field x -> A(x / epsilon). Opposite edges of
/// the unit cell are compared at sampled points (tolerance 1e-9).
CoefficientField make_periodic(MatrixFunction entries_on_unit_cell, double epsilon, double lambda = 1.0,
                               double lipschitz = std::numeric_limits<double>::infinity(), std::string name = "custom");

struct EllipticityBounds {
    double lower;
    double upper;
};

/// Min and max Rayleigh quotients over sample_points x sample_directions.
/// Periodic fields are sampled on one period; general fields on [-1, 1]^2.
EllipticityBounds check_ellipticity(const CoefficientField& field, int sample_points, int sample_directions);

/// max over grid edges of |A(p) - A(q)|_inf / |p - q|; a lower estimate.
double estimate_lipschitz(const CoefficientField& field, const Grid& grid);

struct CoefficientLibraryEntry {
    std::string name;
    CoefficientField field;
    std::string provenance;
};

/// Built-in closed-form fields, all instantiated at the given epsilon:
/// identity, diagonal (diag(1/2, 2)), sinsin ((2 + sin sin) I) and
/// checkerboard (smoothed square-wave product).
std::vector<CoefficientLibraryEntry> coefficient_library(double epsilon = 1.0);

/// Looks a library entry up by name; throws InvalidArgument if unknown.
CoefficientField library_coefficient(const std::string& name, double epsilon = 1.0);

}  // namespace nodal
