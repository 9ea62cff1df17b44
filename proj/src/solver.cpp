#include "nodal/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace nodal {

namespace {

// Conductances on the east edge (i, j)-(i+1, j) and north edge (i, j)-(i, j+1).
struct EdgeConductance {
    std::vector<double> east;
    std::vector<double> north;
};

double harmonic_mean(double a, double b) { return 2.0 * a * b / (a + b); }

EdgeConductance edge_conductance(const CoefficientField& field, const Grid& g) {
    const int n = g.n();
    std::vector<Matrix2> a(g.size());
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            Matrix2 m = field(g.node(i, j));
            if (!m.is_diagonal())
                throw InvalidArgument("five-point flux stencil needs a diagonal coefficient matrix ('" + field.name() +
                                      "' has a12 != 0)");
            a[g.index(i, j)] = m;
        }
    }
    EdgeConductance c{std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 0.0)};
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const std::size_t k = g.index(i, j);
            if (i + 1 < n) c.east[k] = harmonic_mean(a[k].a11, a[g.index(i + 1, j)].a11);
            if (j + 1 < n) c.north[k] = harmonic_mean(a[k].a22, a[g.index(i, j + 1)].a22);
        }
    }
    return c;
}

EdgeConductance unit_conductance(const Grid& g) {
    return {std::vector<double>(g.size(), 1.0), std::vector<double>(g.size(), 1.0)};
}

// Solves the flux balance at every node with unknown[k] set, holding the
// remaining entries of `values` fixed. Unknown nodes must be interior.
SolveReport solve_masked(const Grid& g, const EdgeConductance& c, std::vector<double>& values,
                         const std::vector<char>& unknown, double tol, int max_iterations) {
    if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
    const int n = g.n();
    std::vector<int> id(g.size(), -1);
    int count = 0;
    for (std::size_t k = 0; k < g.size(); ++k)
        if (unknown[k]) id[k] = count++;

    SolveReport report{0, 0.0, 0.0, g};
    if (count == 0) return report;

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(count) * 5);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(count);

    // neighbours: (di, dj, conductance)
    auto neighbours = [&](int i, int j, auto&& visit) {
        const std::size_t k = g.index(i, j);
        visit(i + 1, j, c.east[k]);
        visit(i - 1, j, c.east[g.index(i - 1, j)]);
        visit(i, j + 1, c.north[k]);
        visit(i, j - 1, c.north[g.index(i, j - 1)]);
    };

    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const std::size_t k = g.index(i, j);
            if (!unknown[k]) continue;
            if (i == 0 || j == 0 || i == n - 1 || j == n - 1)
                throw InvalidArgument("unknown node on the grid boundary");
            const int row = id[k];
            double diag = 0.0;
            neighbours(i, j, [&](int ii, int jj, double w) {
                diag += w;
                const std::size_t kk = g.index(ii, jj);
                if (unknown[kk])
                    trip.emplace_back(row, id[kk], -w);
                else
                    rhs[row] += w * values[kk];
            });
            trip.emplace_back(row, row, diag);
        }
    }

    Eigen::SparseMatrix<double> A(count, count);
    A.setFromTriplets(trip.begin(), trip.end());

    Eigen::VectorXd x = Eigen::VectorXd::Zero(count);
    if (rhs.norm() > 0.0) {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                                 Eigen::IncompleteCholesky<double>>
            cg;
        cg.setTolerance(tol);
        cg.setMaxIterations(max_iterations);
        cg.compute(A);
        if (cg.info() != Eigen::Success) throw SolverFailure("preconditioner setup failed", report);
        x = cg.solve(rhs);
        report.iterations = static_cast<int>(cg.iterations());
        report.relative_residual = cg.error();
        if (cg.info() != Eigen::Success || !(cg.error() <= tol))
            throw SolverFailure("no convergence after " + std::to_string(cg.iterations()) +
                                    " iterations (relative residual " + std::to_string(cg.error()) + ")",
                                report);
    }

    for (std::size_t k = 0; k < g.size(); ++k)
        if (unknown[k]) values[k] = x[id[k]];

    const double h2 = g.spacing() * g.spacing();
    double sum = 0.0;
    for (int j = 1; j < n - 1; ++j) {
        for (int i = 1; i < n - 1; ++i) {
            const std::size_t k = g.index(i, j);
            if (!unknown[k]) continue;
            double flux = 0.0;
            neighbours(i, j, [&](int ii, int jj, double w) { flux += w * (values[g.index(ii, jj)] - values[k]); });
            const double div = flux / h2;
            sum += div * div * h2;
        }
    }
    report.residual = std::sqrt(sum);
    return report;
}

}  // namespace

std::pair<ScalarField, SolveReport> solve_dirichlet(const CoefficientField& field, const Grid& grid,
                                                    const BoundaryData& bdata, double tol, int max_iterations) {
    if (!bdata.trace) throw InvalidArgument("boundary data has no trace");
    if (field.periodic() && grid.spacing() > field.epsilon() / 8.0 * (1.0 + 1e-12))
        throw ResolutionError("grid spacing " + std::to_string(grid.spacing()) + " exceeds epsilon/8 = " +
                              std::to_string(field.epsilon() / 8.0));

    const int n = grid.n();
    std::vector<double> values(grid.size(), 0.0);
    std::vector<char> unknown(grid.size(), 1);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i == 0 || j == 0 || i == n - 1 || j == n - 1) {
                const std::size_t k = grid.index(i, j);
                values[k] = bdata.trace(grid.node(i, j));
                unknown[k] = 0;
            }
        }
    }
    SolveReport report = solve_masked(grid, edge_conductance(field, grid), values, unknown, tol, max_iterations);
    return {ScalarField(grid, std::move(values)), report};
}

ScalarField harmonic_extension(const ScalarField& u, const Ball& ball, double tol) {
    const Grid& g = u.grid();
    if (!g.contains(ball, 2.0 * g.spacing())) throw DomainError("ball does not fit in the grid with a 2h margin");
    std::vector<double> values(u.values().begin(), u.values().end());
    std::vector<char> unknown(g.size(), 0);
    for_each_node_in(g, ball, [&](int i, int j, Point p) {
        if (distance(p, ball.center) < ball.radius) unknown[g.index(i, j)] = 1;
    });
    solve_masked(g, unit_conductance(g), values, unknown, tol, kDefaultMaxIterations);
    return ScalarField(g, std::move(values));
}

MaxPrincipleCheck max_principle_check(const ScalarField& u) {
    const double inf = std::numeric_limits<double>::infinity();
    MaxPrincipleCheck c{inf, -inf, inf, -inf, 0.0};
    const int n = u.grid().n();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double v = u.at(i, j);
            if (i == 0 || j == 0 || i == n - 1 || j == n - 1) {
                c.boundary_min = std::min(c.boundary_min, v);
                c.boundary_max = std::max(c.boundary_max, v);
            } else {
                c.interior_min = std::min(c.interior_min, v);
                c.interior_max = std::max(c.interior_max, v);
            }
        }
    }
    c.excess = std::max({c.interior_max - c.boundary_max, c.boundary_min - c.interior_min, 0.0});
    return c;
}

}  // namespace nodal
