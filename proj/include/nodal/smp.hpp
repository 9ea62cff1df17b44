#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nodal/field.hpp"

namespace nodal {

enum class SmpKind { SMP, WSMP };

std::string to_string(SmpKind k);

struct SmpViolation {
    Ball ball;
    Point point;
    double value;
};

struct SmpCheckReport {
    SmpKind kind;
    std::vector<SmpViolation> violations;
    bool passed;
    /// Grid spacing the check was run at; a pass is evidence at this resolution only.
    double resolution;
    int balls_checked;
};

/// Looks for interior extrema. WSMP: for n_balls radii r = R j / n_balls
/// the max and min of u over the nodes of B(c, r) must be reached within 2h
/// of the boundary circle, up to `tol`. SMP adds n_balls random sub-balls
/// drawn from `seed`. The domain is the ball B(c, R).
SmpCheckReport check_smp(const ScalarField& u, SmpKind kind, int n_balls, double tol = 1e-9, Point center = {},
                         double radius = 1.0, std::uint64_t seed = 20240601);

/// Largest r <= r_max (dyadic halving, then bisection) such that the
/// interpolant has the strict sign on B(p, r), checked on every cell meeting
/// the ball. Returns 0 when no radius down to h/64 passes.
double sign_persistence_radius(const ScalarField& u, Point p, int sign, double r_max);

struct ShellRecord {
    double s;
    Point x_s;
    Point y_s;
    double r_s;
    double theta1;
    double theta2;
    int circles_checked;
    double credit;
};

struct SmpCertificate {
    std::vector<ShellRecord> shells;
    double s_initial = 1.0;
    double s_final = 1.0;
    /// 2 (s_initial - s_final), the sum of shell credits.
    double certified_lower_bound = 0.0;
    bool completed = false;
    std::string diagnostic;
    int m_angles = 0;
    double stop_radius = 0.0;
    double resolution = 0.0;
    double min_shell_width = 0.0;
    Point center;
};

struct SmpCertifyOptions {
    Point center{};
    double radius = 1.0;
    /// Shells narrower than this end the descent; <= 0 selects h / 4.
    double min_shell_width = 0.0;
    /// |u(center)| must not exceed zero_tol * sup |u|.
    double zero_tol = 1e-9;
    int wsmp_balls = 32;
};

/// Descending-shell certificate. From s = R down to stop_radius: take the
/// max point x_s and min point y_s of u on the circle of radius s, a radius
/// r_s on which u keeps its sign around both, confirm on at least 8 circles
/// t in [s - r_s/2, s) a zero in each of the two arcs between x_s and y_s,
/// credit r_s, and continue from s - r_s/2. A failing shell stops the
/// descent and leaves a partial certificate with a diagnostic.
SmpCertificate certify_smp_lower_bound(const ScalarField& u, int m_angles, double stop_radius,
                                       const SmpCertifyOptions& opts = {});

struct WsmpRow {
    std::string id;
    bool precheck_passed;
    double measured_length;
    double certified_bound;
    std::string diagnostic;
};

struct NamedField {
    std::string id;
    ScalarField field;
};

/// Measured nodal length in B(0,1) and certified bound for every family
/// member passing the WSMP precheck and vanishing at 0; others are skipped
/// with a diagnostic.
std::vector<WsmpRow> wsmp_infimum_experiment(const std::vector<NamedField>& family, int m_angles = 256,
                                             double stop_radius = 0.01);

}  // namespace nodal
