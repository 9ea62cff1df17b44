#include "nodal/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "nodal/errors.hpp"

namespace nodal {

double Matrix2::max_abs_diff(const Matrix2& o) const {
    return std::max({std::abs(a11 - o.a11), std::abs(a12 - o.a12), std::abs(a22 - o.a22)});
}

CoefficientField CoefficientField::general(MatrixFunction entries, double lambda, double lipschitz, std::string name) {
    if (!entries) throw InvalidArgument("coefficient field needs an evaluator");
    if (!(lambda >= 1.0)) throw InvalidArgument("ellipticity constant must satisfy lambda >= 1");
    CoefficientField f;
    f.entries_ = std::move(entries);
    f.lambda_ = lambda;
    f.lipschitz_ = lipschitz;
    f.periodic_ = false;
    f.epsilon_ = 1.0;
    f.name_ = std::move(name);
    return f;
}

Matrix2 CoefficientField::operator()(Point x) const {
    if (!periodic_) return entries_(x);
    double y1 = x.x / epsilon_, y2 = x.y / epsilon_;
    y1 -= std::floor(y1);
    y2 -= std::floor(y2);
    return entries_({y1, y2});
}

CoefficientField CoefficientField::rescaled(double epsilon) const {
    if (!periodic_) throw InvalidArgument("only periodic fields can be rescaled");
    return make_periodic(entries_, epsilon, lambda_, lipschitz_, name_);
}

CoefficientField make_periodic(MatrixFunction entries, double epsilon, double lambda, double lipschitz,
                               std::string name) {
    if (!entries) throw InvalidArgument("coefficient field needs an evaluator");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in (0, 1]");
    if (!(lambda >= 1.0)) throw InvalidArgument("ellipticity constant must satisfy lambda >= 1");

    constexpr int kEdgeSamples = 64;
    constexpr double kTol = 1e-9;
    for (int s = 0; s <= kEdgeSamples; ++s) {
        const double t = static_cast<double>(s) / kEdgeSamples;
        double dx = entries({0.0, t}).max_abs_diff(entries({1.0, t}));
        double dy = entries({t, 0.0}).max_abs_diff(entries({t, 1.0}));
        if (dx > kTol || dy > kTol)
            throw NotPeriodicError("cell edges disagree by " + std::to_string(std::max(dx, dy)) + " at t = " +
                                   std::to_string(t));
    }

    CoefficientField f;
    f.entries_ = std::move(entries);
    f.lambda_ = lambda;
    f.lipschitz_ = lipschitz;
    f.periodic_ = true;
    f.epsilon_ = epsilon;
    f.name_ = std::move(name);
    return f;
}

EllipticityBounds check_ellipticity(const CoefficientField& field, int sample_points, int sample_directions) {
    if (sample_points < 100) throw InvalidArgument("check_ellipticity needs at least 100 sample points");
    if (sample_directions < 8) throw InvalidArgument("check_ellipticity needs at least 8 directions");
    const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(sample_points))));
    const double extent = field.periodic() ? field.epsilon() : 2.0;
    const double origin = field.periodic() ? 0.0 : -1.0;

    EllipticityBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (int j = 0; j < side; ++j) {
        for (int i = 0; i < side; ++i) {
            Point p{origin + extent * i / side, origin + extent * j / side};
            Matrix2 a = field(p);
            for (int d = 0; d < sample_directions; ++d) {
                // directions over a half circle cover every quotient
                double th = kPi * d / sample_directions;
                double q = a.quadratic(std::cos(th), std::sin(th));
                b.lower = std::min(b.lower, q);
                b.upper = std::max(b.upper, q);
            }
        }
    }
    return b;
}

double estimate_lipschitz(const CoefficientField& field, const Grid& grid) {
    const int n = grid.n();
    const double h = grid.spacing();
    std::vector<Matrix2> vals(grid.size());
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) vals[grid.index(i, j)] = field(grid.node(i, j));

    double best = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const Matrix2& a = vals[grid.index(i, j)];
            if (i + 1 < n) best = std::max(best, a.max_abs_diff(vals[grid.index(i + 1, j)]) / h);
            if (j + 1 < n) best = std::max(best, a.max_abs_diff(vals[grid.index(i, j + 1)]) / h);
        }
    }
    return best;
}

namespace {

// Smoothed square wave with values in [-1, 1]; C-infinity and 1-periodic.
double smooth_square(double t) {
    constexpr double kSharpness = 4.0;
    return std::tanh(kSharpness * std::sin(kTwoPi * t)) / std::tanh(kSharpness);
}

}  // namespace

std::vector<CoefficientLibraryEntry> coefficient_library(double epsilon) {
    std::vector<CoefficientLibraryEntry> lib;
    lib.push_back({"identity", make_periodic([](Point) { return Matrix2{1.0, 0.0, 1.0}; }, epsilon, 1.0, 0.0, "identity"),
                   "Laplacian; constant, hence periodic"});
    lib.push_back({"diagonal",
                   make_periodic([](Point) { return Matrix2{0.5, 0.0, 2.0}; }, epsilon, 2.0, 0.0, "diagonal"),
                   "constant anisotropic diag(1/2, 2)"});
    lib.push_back({"sinsin",
                   make_periodic(
                       [](Point y) {
                           double a = 2.0 + std::sin(kTwoPi * y.x) * std::sin(kTwoPi * y.y);
                           return Matrix2{a, 0.0, a};
                       },
                       epsilon, 3.0, kTwoPi, "sinsin"),
                   "(2 + sin(2 pi y1) sin(2 pi y2)) I, eigenvalues in [1, 3]"});
    lib.push_back({"checkerboard",
                   make_periodic(
                       [](Point y) {
                           double a = 2.0 + 0.9 * smooth_square(y.x) * smooth_square(y.y);
                           return Matrix2{a, 0.0, a};
                       },
                       epsilon, 3.0, 0.9 * 4.0 * kTwoPi / std::tanh(4.0), "checkerboard"),
                   "(2 + 0.9 s(y1) s(y2)) I with s a tanh-smoothed square wave"});
    return lib;
}

CoefficientField library_coefficient(const std::string& name, double epsilon) {
    for (auto& e : coefficient_library(epsilon))
        if (e.name == name) return e.field;
    throw InvalidArgument("unknown coefficient '" + name + "'");
}

}  // namespace nodal
