#pragma once

#include <functional>
#include <string>
#include <utility>

#include "nodal/coeffs.hpp"
#include "nodal/errors.hpp"
#include "nodal/field.hpp"

namespace nodal {

struct BoundaryData {
    std::function<double(Point)> trace;
    std::string description;
};

struct SolveReport {
    int iterations = 0;
    /// Discrete L2 norm of the flux divergence over the unknown nodes.
    double residual = 0.0;
    /// |b - Ax| / |b| reported by the Krylov solver.
    double relative_residual = 0.0;
    Grid grid;
};

class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, SolveReport report)
        : Error("solver failure: " + what), report_(std::move(report)) {}
    const SolveReport& report() const { return report_; }

private:
    SolveReport report_;
};

inline constexpr int kDefaultMaxIterations = 20000;

/// Solves div(A grad u) = 0 on the grid square with u = trace on the boundary
/// nodes. Flux-form five-point stencil with harmonically averaged edge
/// coefficients, so the discrete maximum principle holds. The matrix field
/// must be diagonal. Periodic fields need h <= epsilon / 8.
std::pair<ScalarField, SolveReport> solve_dirichlet(const CoefficientField& field, const Grid& grid,
                                                    const BoundaryData& bdata, double tol = 1e-12,
                                                    int max_iterations = kDefaultMaxIterations);

/// Discrete harmonic function on the nodes strictly inside `ball`, taking
/// the values of u at every other node. The result lives on u's grid and
/// equals u outside the ball.
ScalarField harmonic_extension(const ScalarField& u, const Ball& ball, double tol = 1e-12);

struct MaxPrincipleCheck {
    double boundary_min;
    double boundary_max;
    double interior_min;
    double interior_max;
    /// max(interior_max - boundary_max, boundary_min - interior_min, 0).
    double excess;
};

/// Interior extremes of a grid function against its values on the grid boundary.
MaxPrincipleCheck max_principle_check(const ScalarField& u);

}  // namespace nodal
