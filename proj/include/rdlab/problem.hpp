#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

namespace rdlab {

/**
 * @brief One physical instance of the reaction-diffusion problem
 *
 *   dC/dt = de * d2C/dx2 - k*C   on the symmetric slab x in [-L, L]
 *   C(+-L, t) = c0,  C(x, 0) = 0 for |x| < L
 *
 * with L = half_thickness. The domain is symmetric about x = 0; the fixed
 * surface concentration c0 is applied at both walls.
 *
 * Units: de [m^2/s], k [1/s], c0 [mol/m^3], half_thickness [m].
 *
 * k is treated as a constant. Handbook data for sulfate attack describe it as
 * a linear function of temperature with endpoints 25 mol/m3 at 273 K and
 * 10 mol/m3 at 373 K (sic - units as reported); that dependence is documented
 * here but intentionally not modeled.
 */
struct ProblemSpec {
    double de = 0.0;              ///< effective diffusion coefficient, m^2/s
    double k = 0.0;               ///< first-order reaction rate, 1/s
    double c0 = 0.0;              ///< boundary concentration, mol/m^3
    double half_thickness = 0.0;  ///< slab half-width L, m

    void validate() const {
        if (!(de > 0.0)) throw std::invalid_argument("ProblemSpec: de must be > 0");
        if (!(k >= 0.0)) throw std::invalid_argument("ProblemSpec: k must be >= 0");
        if (!(c0 >= 0.0)) throw std::invalid_argument("ProblemSpec: c0 must be >= 0");
        if (!(half_thickness > 0.0))
            throw std::invalid_argument("ProblemSpec: half_thickness must be > 0");
    }

    /// Decay rate of the slowest spatial mode, lambda_0 = de*(pi/2L)^2.
    double lambda0() const {
        double w0 = M_PI / (2.0 * half_thickness);
        return de * w0 * w0;
    }
};

/// A query point; |x| <= half_thickness of the spec it is evaluated against.
struct SpaceTimePoint {
    double x = 0.0;  ///< position, m
    double t = 0.0;  ///< time, s
};

/// Truncation control for the series evaluators. tail_tol is an absolute
/// magnitude in mol/m^3; when unset it defaults to 1e-12 * c0.
struct SeriesOptions {
    int max_terms = 500;
    std::optional<double> tail_tol{};

    double resolved_tail_tol(double c0) const {
        return tail_tol ? *tail_tol : 1e-12 * c0;
    }
};

/**
 * @brief Per-term coefficients of the closed-form series solution.
 *
 *   a_n   = (-1)^n / (2n+1)
 *   w_n   = (2n+1) pi / (2L)
 *   psi_n = 4L^2 / (-de (2n+1)^2 pi^2 - 4 k L^2)      (negative by construction)
 *   p     = exp(t / psi_n)                             in (0, 1]
 *
 * They satisfy k*psi_n*(p-1) + p = (k + lambda_n p)/(k + lambda_n) with
 * lambda_n = de * w_n^2.
 */
struct TermCoefficients {
    double a_n = 0.0;
    double omega_n = 0.0;  ///< wavenumber, 1/m
    double psi_n = 0.0;    ///< time constant, s (negative)
    double p = 0.0;        ///< decay factor exp(t/psi_n)
};

inline constexpr double kSecondsPerYear = 3.1536e7;

}  // namespace rdlab
