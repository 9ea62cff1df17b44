#pragma once

#include <iosfwd>
#include <vector>

#include "nodal/field.hpp"

namespace nodal {

struct Segment {
    Point a;
    Point b;
    double length() const { return distance(a, b); }
};

/// Polyline approximation of {u = 0} for the bilinear interpolant of u.
struct NodalSet {
    std::vector<Segment> segments;
    double total_length = 0.0;
    /// Spacing of the source grid.
    double resolution = 0.0;
};

/// Marching squares on every grid cell, row-major cell order. Node values
/// equal to zero count as positive. Saddle cells are split by the sign of
/// the bilinear saddle value; a zero saddle value yields the two crossing
/// lines through the saddle point.
NodalSet extract_nodal_set(const ScalarField& u);

/// Length of seg inside the closed disk (exact quadratic clip).
double clipped_length(const Segment& seg, Point center, double radius);

double nodal_length_in(const NodalSet& z, const Ball& region);
double nodal_length_in(const NodalSet& z, const Annulus& region);
/// Throw DomainError when the region leaves the grid square.
double nodal_length_in(const ScalarField& u, const Ball& region);
double nodal_length_in(const ScalarField& u, const Annulus& region);

/// Covering estimate of the nodal length in `region`. The zero set (clipped
/// to the region) is covered by half-open boxes of side box_size on a
/// lattice anchored at the region centre, the count is averaged over
/// `rotations` lattice orientations in [0, pi/2), and the mean covering
/// length count * box_size is divided by 4/pi, the orientation average of
/// |cos| + |sin|. Needs box_size >= 2h.
double box_counting_length(const ScalarField& u, const Ball& region, double box_size, int rotations = 16);

/// Raw covering count for one lattice orientation (radians).
long box_count(const NodalSet& z, const Ball& region, double box_size, double rotation);

struct CircleZeroWitness {
    double radius;
    /// Midpoint of the refined bracket.
    double angle;
    double angle_lo;
    double angle_hi;
};

/// Sign changes of the interpolant along the circle |x - center| = radius,
/// sampled at m >= 64 angles (zero counts as positive) and refined by
/// bisection to angular width <= 1e-6. Witnesses are ordered by angle.
std::vector<CircleZeroWitness> circle_sign_changes(const ScalarField& u, double radius, int m, Point center = {});

/// One segment per row: x1,y1,x2,y2 (with header).
void write_nodal_csv(const NodalSet& z, std::ostream& os);

}  // namespace nodal
