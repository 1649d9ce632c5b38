#include <rdlab/analytic.hpp>
#include <rdlab/csvio.hpp>
#include <rdlab/errors.hpp>
#include <rdlab/fd.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace rdlab::fd {

namespace {

constexpr double kPivotFloor = 1e-300;

/// In-place Thomas elimination; rhs becomes the solution.
void thomas(const double* lower, const double* diag, const double* upper, double* rhs,
            double* scratch, int n) {
    double beta = diag[0];
    if (std::abs(beta) < kPivotFloor) throw SingularSystem("tridiagonal pivot underflow at row 0");
    scratch[0] = upper[0] / beta;
    rhs[0] /= beta;
    for (int i = 1; i < n; ++i) {
        beta = diag[i] - lower[i] * scratch[i - 1];
        if (std::abs(beta) < kPivotFloor)
            throw SingularSystem("tridiagonal pivot underflow at row " + std::to_string(i));
        scratch[i] = upper[i] / beta;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for (int i = n - 2; i >= 0; --i) rhs[i] -= scratch[i] * rhs[i + 1];
}

}  // namespace

Grid Grid::make(int nx, long nt, double horizon, double half_thickness) {
    if (nx < 3 || nx % 2 == 0) throw std::invalid_argument("Grid: nx must be odd and >= 3");
    if (nt < 1) throw std::invalid_argument("Grid: nt must be >= 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("Grid: horizon must be > 0");
    if (!(half_thickness > 0.0)) throw std::invalid_argument("Grid: half_thickness must be > 0");
    Grid g;
    g.nx = nx;
    g.nt = nt;
    g.horizon = horizon;
    g.dx = 2.0 * half_thickness / (nx - 1);
    g.dt = horizon / static_cast<double>(nt);
    return g;
}

Grid Grid::with_defaults(const ProblemSpec& spec, double horizon) {
    spec.validate();
    return make(201, 400, horizon, spec.half_thickness);
}

double SolutionField::probe(double x, double t) const {
    const double L = spec.half_thickness;
    if (!(std::abs(x) <= L)) throw OutOfDomain("probe: x outside [-L, L]");
    if (!(t >= 0.0 && t <= grid.horizon)) throw OutOfDomain("probe: t outside [0, horizon]");
    double fx = (x + L) / grid.dx;
    double ft = t / grid.dt;
    int i = std::min(static_cast<int>(fx), grid.nx - 2);
    long j = std::min(static_cast<long>(ft), grid.nt - 1);
    double wx = fx - i;
    double wt = ft - j;
    return at(j, i) * (1.0 - wx) * (1.0 - wt) + at(j, i + 1) * wx * (1.0 - wt) +
           at(j + 1, i) * (1.0 - wx) * wt + at(j + 1, i + 1) * wx * wt;
}

void SolutionField::write_csv(std::ostream& os) const {
    os << "x,t,c\n";
    const double L = spec.half_thickness;
    for (long row = 0; row <= grid.nt; ++row) {
        double t = (row == grid.nt) ? grid.horizon : row * grid.dt;
        for (int i = 0; i < grid.nx; ++i) {
            double x = -L + i * grid.dx;
            os << io::format_g17(x) << ',' << io::format_g17(t) << ','
               << io::format_g17(at(row, i)) << '\n';
        }
    }
}

SolutionField solve(const ProblemSpec& spec, const Grid& grid) {
    spec.validate();
    const int nx = grid.nx;
    const long nt = grid.nt;
    const double mu = spec.de * grid.dt / (2.0 * grid.dx * grid.dx);
    const double kap = spec.k * grid.dt / 2.0;

    SolutionField field{grid, spec, {}};
    field.values.assign(static_cast<std::size_t>(nt + 1) * nx, 0.0);

    std::vector<double> lower(nx, -mu), diag(nx, 1.0 + 2.0 * mu + kap), upper(nx, -mu);
    // Dirichlet rows pinned to c0.
    lower[0] = lower[nx - 1] = 0.0;
    upper[0] = upper[nx - 1] = 0.0;
    diag[0] = diag[nx - 1] = 1.0;

    std::vector<double> c(nx, 0.0), rhs(nx), scratch(nx);
    c[0] = c[nx - 1] = spec.c0;
    std::copy(c.begin(), c.end(), field.values.begin());

    for (long step = 0; step < nt; ++step) {
        rhs[0] = spec.c0;
        rhs[nx - 1] = spec.c0;
        for (int i = 1; i < nx - 1; ++i)
            rhs[i] = c[i] * (1.0 - 2.0 * mu - kap) + mu * (c[i - 1] + c[i + 1]);
        thomas(lower.data(), diag.data(), upper.data(), rhs.data(), scratch.data(), nx);
        c = rhs;
        std::copy(c.begin(), c.end(),
                  field.values.begin() + static_cast<std::size_t>(step + 1) * nx);
    }
    return field;
}

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0 || lower.size() != n || upper.size() != n || rhs.size() != n)
        throw std::invalid_argument("solve_tridiagonal: inconsistent lengths");
    std::vector<double> x(rhs.begin(), rhs.end());
    std::vector<double> scratch(n);
    thomas(lower.data(), diag.data(), upper.data(), x.data(), scratch.data(),
           static_cast<int>(n));
    return x;
}

double observed_order(const ProblemSpec& spec, int base_nx, double horizon) {
    spec.validate();
    if (base_nx < 51) throw std::invalid_argument("observed_order: base_nx must be >= 51");
    if (base_nx % 2 == 0) throw std::invalid_argument("observed_order: base_nx must be odd");
    if (!(horizon > 0.0))
        throw std::invalid_argument("observed_order: degenerate study rejected (horizon must be > 0)");

    // Probe at base-grid nodes so interpolation error cannot pollute the
    // estimate; the refined grid contains every base node.
    const double fractions[] = {0.1, 0.3, 0.5, 0.64, 0.8};
    SeriesOptions opts{60000, 1e-11 * spec.c0};

    double errs[2];
    for (int level = 0; level < 2; ++level) {
        int nx = (level == 0) ? base_nx : 2 * (base_nx - 1) + 1;
        long nt = 8L * (nx - 1);
        Grid g = Grid::make(nx, nt, horizon, spec.half_thickness);
        SolutionField f = solve(spec, g);
        double e = 0.0;
        for (double frac : fractions) {
            int i_base = static_cast<int>(std::lround(frac * (base_nx - 1)));
            int i = (level == 0) ? i_base : 2 * i_base;
            double x = -spec.half_thickness + i * g.dx;
            double ref = analytic::reaction_diffusion_series(spec, {x, horizon}, opts);
            e = std::max(e, std::abs(f.at(nt, i) - ref));
        }
        errs[level] = e;
    }
    return std::log2(errs[0] / errs[1]);
}

}  // namespace rdlab::fd
