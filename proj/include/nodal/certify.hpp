#pragma once

#include <string>
#include <vector>

#include "nodal/coeffs.hpp"
#include "nodal/field.hpp"

namespace nodal {

/// Nested-ball extrema on radii r_0 < ... < r_k and the induced S-good sets.
struct AnnulusDecomposition {
    Point center;
    std::vector<double> radii;
    /// M[i] = max, m[i] = min of u over grid nodes of B(center, radii[i]).
    std::vector<double> M;
    std::vector<double> m;
    double S = 2.0;
    std::vector<int> good_plus;
    std::vector<int> good_minus;
    int k_plus = 0;
    int k_minus = 0;

    int k() const { return static_cast<int>(radii.size()) - 1; }
    double width() const { return radii[1] - radii[0]; }
    std::vector<int> good_both() const;
    /// log2 of the larger of M_k / M_0 and m_k / m_0.
    double growth_exponent() const;
};

/// Annulus count 3 max(1, ceil(N log_S 2)) with N the growth exponent across
/// [inner, outer]. With this k at most a third of the indices can fail either
/// test, so |good_plus ∩ good_minus| >= k / 3.
int auto_annulus_count(const ScalarField& u, Point center, double inner, double outer, double S);

/// k <= 0 selects auto_annulus_count. Throws HypothesisViolation when
/// |u(center)| exceeds zero_tol * sup |u| on the outer ball or when u keeps
/// one sign on some B(center, r_i).
AnnulusDecomposition decompose_annuli(const ScalarField& u, Point center, double inner, double outer, int k,
                                      double S, double zero_tol = 1e-9);

/// S^(k - k_plus) <= M_k / M_0 and the same for m, replayed from the stored
/// extrema (relative slack 1e-12 for the product rounding).
bool chain_inequality_holds(const AnnulusDecomposition& dec);

struct SignDefiniteBall {
    Ball ball;
    int sign;
    int index;
};

/// For each index in good_plus ∩ good_minus, balls of the given radius at the
/// max and min of u on the circle r_i (1024 interpolated samples). A ball is
/// kept iff the interpolant has the strict sign on it and it lies in the
/// open annulus (r_{i-1}, r_{i+1}); r_{-1} is r_0 minus the width.
std::vector<SignDefiniteBall> locate_sign_definite_balls(const ScalarField& u, const AnnulusDecomposition& dec,
                                                         double ball_radius);

/// Sum over indices holding a verified (+, -) pair of min(2 rho, width).
/// Every circle |x - c| = t with |t - r_i| < rho meets both balls, so it
/// carries two zeros; the intervals overlap at most twice, which keeps the
/// sum below the length in the annulus (r_0 - width, r_k). Balls are
/// re-verified on u.
double certified_length_from_decomposition(const ScalarField& u, const AnnulusDecomposition& dec,
                                           const std::vector<SignDefiniteBall>& balls);

struct TileCube {
    int t;
    /// Zero on the boundary of the square of half-side t (fast units).
    Point witness;
    int cx;
    int cy;
    bool admissible;
    bool selected;
    double bound;
    std::string diagnostic;
    /// Decomposition behind the bound; annuli = 0 when none was computed.
    int annuli = 0;
    int good_both = 0;
    bool chain_ok = true;
};

struct TilingCertificate {
    double epsilon = 0.0;
    double radius = 1.0;
    int k = 0;
    bool single_ball = false;
    std::vector<TileCube> cubes;
    int disjoint_count = 0;
    /// Mean certified length over the selected cubes, original units.
    double per_cube_bound = 0.0;
    double min_cube_bound = 0.0;
    /// disjoint_count * per_cube_bound, the sum over selected cubes.
    double total_bound = 0.0;
    /// total_bound / epsilon, length in the fast variable.
    double total_fast = 0.0;
};

struct TilingOptions {
    Point center{};
    double radius = 1.0;
    /// epsilon / radius above this takes the single-ball path.
    double case_threshold = 1e-4;
    int local_n = 257;
    double S = 2.0;
};

/// Cube tiling in the fast variable y = (x - center) / epsilon. For t = 1..k,
/// k = round(radius / epsilon), the zero on the square of half-side t nearest
/// the centre is attached to the side-2 cube around its rounded position.
/// Cubes inside the disk are taken greedily in ascending t when their closed
/// cubes are disjoint from those already taken. Each taken cube is certified
/// by an annulus decomposition on [eps/4, eps/2] around its witness, computed
/// on a finer resampling of the interpolant.
TilingCertificate tile_and_certify(const ScalarField& u_eps, const CoefficientField& field,
                                   const TilingOptions& opts = {});

struct PerturbationResult {
    double eps_observed = 0.0;
    double certified_length = 0.0;
    double perturbation_sup = 0.0;
    AnnulusDecomposition decomposition;
    std::vector<SignDefiniteBall> balls;
};

/// eps_observed = sup_region |u - u0| / sup_{half region} |u0|. Balls come
/// from a decomposition of u0 on [R/2, 7R/10]; a ball survives when the sign
/// margin of u0 on it exceeds 2 sup |u - u0|, and the survivors are credited
/// against u.
PerturbationResult perturbation_certificate(const ScalarField& u, const ScalarField& u0, const Ball& region);

}  // namespace nodal
