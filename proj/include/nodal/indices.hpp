#pragma once

#include "nodal/field.hpp"

namespace nodal {

/// Integral of u^2 over a ball: cell-midpoint rule on cells fully inside,
/// boundary cells subdivided `subdivisions` x `subdivisions`.
double l2_mass(const ScalarField& u, const Ball& ball, int subdivisions = 4);

/// log2( int_{B(c,r)} u^2 / int_{B(c,r/2)} u^2 ).
double doubling_index_l2(const ScalarField& u, Point center, double r);

/// sup |u| of the bilinear interpolant over the ball: nodes inside plus
/// `circle_samples` points on the boundary circle.
double interpolant_sup_abs(const ScalarField& u, const Ball& ball, int circle_samples = 4096);

/// log2( sup_{B(c,r_outer)} |u| / sup_{B(c,r_inner)} |u| ), interpolant sups.
double doubling_index_sup(const ScalarField& u, Point center, double r_outer, double r_inner);

struct NodeExtrema {
    double max;
    double min;
    double max_abs;
    Point argmax;
    Point argmin;
    int count;
};
/// Extrema of u over the grid nodes in the ball; count = 0 when empty.
NodeExtrema node_extrema(const ScalarField& u, const Ball& ball);

struct HarnackRecord {
    Ball ball;
    double sup_inner;
    double inf_inner;
    /// sup |u| over the concentric ball of radius 4/5 * ball.radius.
    double sup_abs_smaller;
    double ratio;
};

/// sup / inf of a positive u over the nodes in the ball.
HarnackRecord harnack_ratio(const ScalarField& u, const Ball& ball);

struct HarnackTypeValues {
    double lhs;  ///< sup_{B(c, R/2)} u
    double rhs;  ///< sup_{B(c, 2R/5)} |u|
};

/// Both sides of sup_{B_1/2} u >= C sup_{B_2/5} |u| for the ball B(c, R).
/// Requires u(c) >= 0.
HarnackTypeValues harnack_type_check(const ScalarField& u, Point center = {}, double radius = 1.0);

struct ApproximationError {
    /// sup_{ball nodes} |u - w| / (mean over 2*ball of u^2)^(1/2), w the
    /// harmonic extension of u from the boundary of 2*ball.
    double err_sup;
    /// doubling_index_l2 of w at the ball.
    double doubling_of_extension;
};

ApproximationError approximation_error(const ScalarField& u_eps, const Ball& ball);

struct GradientBound {
    double sup_grad_inner;  ///< central-difference |grad u| over B(c, r/2)
    double sup_u_outer;     ///< sup |u| over the ball
};

GradientBound gradient_bound_check(const ScalarField& u, const Ball& ball);

}  // namespace nodal
