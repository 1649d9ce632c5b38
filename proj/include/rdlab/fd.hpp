#pragma once

#include <rdlab/problem.hpp>

#include <iosfwd>
#include <span>
#include <vector>

namespace rdlab::fd {

/// Space-time lattice for the finite-difference solver. nx counts all nodes
/// including both walls and is odd so x = 0 is a node; dx = 2L/(nx-1),
/// dt = horizon/nt.
struct Grid {
    int nx = 0;
    long nt = 0;
    double horizon = 0.0;  ///< final time, s
    double dx = 0.0;
    double dt = 0.0;

    static Grid make(int nx, long nt, double horizon, double half_thickness);

    /// Default policy: nx = 201 and dt <= horizon/400.
    static Grid with_defaults(const ProblemSpec& spec, double horizon);
};

/// Concentration values on the full lattice: (nt+1) rows by nx columns,
/// row 0 is the initial condition, both wall columns pinned to c0.
struct SolutionField {
    Grid grid;
    ProblemSpec spec;
    std::vector<double> values;  ///< row-major (nt+1) x nx

    double at(long row, int col) const { return values[static_cast<std::size_t>(row) * grid.nx + col]; }

    /// Bilinear interpolation on the lattice; throws OutOfDomain outside it.
    double probe(double x, double t) const;

    /// CSV export, header `x,t,c`, one row per lattice point, %.17g rendering.
    void write_csv(std::ostream& os) const;
};

/**
 * @brief Crank-Nicolson solution of dC/dt = de C_xx - k C on [-L, L].
 *
 * Each step solves (I - dt/2 A) C^{n+1} = (I + dt/2 A) C^n with
 * A = de D2 - k I and both Dirichlet rows pinned to c0; the reaction term is
 * carried in-matrix on both levels. Unconditionally stable, second order in
 * dx and dt. Each step is one tridiagonal elimination.
 */
SolutionField solve(const ProblemSpec& spec, const Grid& grid);

/// Thomas algorithm. lower[0] and upper[n-1] are ignored. Throws
/// SingularSystem when an eliminated pivot falls below 1e-300 in magnitude.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

/**
 * @brief Richardson estimate of the scheme's convergence order.
 *
 * Solves on (base_nx, 8(base_nx-1) steps) and the dx/2, dt/2 refinement,
 * measures the max error against the analytic series at base-grid nodes at
 * t = horizon, and returns log2(e(h)/e(h/2)).
 */
double observed_order(const ProblemSpec& spec, int base_nx, double horizon);

}  // namespace rdlab::fd
