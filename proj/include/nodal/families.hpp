#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nodal/geometry.hpp"
#include "nodal/solver.hpp"

namespace nodal {

/// Platform-independent uniform draws (mt19937_64 output is standardised;
/// the std distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * ((engine_() >> 11) * 0x1.0p-53); }
    int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }

private:
    std::mt19937_64 engine_;
};

/// sum_d re[d] Re z^d + im[d] Im z^d with z = x1 + i x2.
struct HarmonicPolynomial {
    std::vector<double> re;
    std::vector<double> im;
    std::string id;

    double operator()(Point p) const;
    int degree() const { return static_cast<int>(re.size()) - 1; }
};

/// Re((x1 + i x2)^d) rotated by `angle`: Re(e^{-i d angle} z^d).
HarmonicPolynomial homogeneous_harmonic(int d, double angle = 0.0);

/// Degree drawn in [1, max_degree], coefficients uniform in [-1, 1] for
/// degrees 1..D; no constant term, so the polynomial vanishes at 0.
HarmonicPolynomial random_harmonic(std::uint64_t seed, int max_degree = 5);

std::vector<HarmonicPolynomial> random_harmonic_family(int count, std::uint64_t first_seed = 1, int max_degree = 5);

/// Named boundary traces:
///   linear-x1, linear-x2            x1, x2
///   harmonic-d<k>                   Re z^k
///   harmonic-mix                    x1 + Re z^2 / 2 + Re z^3 / 4
///   trig-<seed>                     random trigonometric polynomial, degree <= 2
///   positive-trig-<seed>            3 + trig-<seed> / max-bound (strictly positive)
BoundaryData boundary_trace(const std::string& name);

/// Names documented above, for listing.
std::vector<std::string> boundary_trace_names();

}  // namespace nodal
