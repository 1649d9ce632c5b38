#pragma once

#include <rdlab/problem.hpp>

namespace rdlab::analytic {

/// Coefficients (a_n, w_n, psi_n, p) of term n at time t. Total on n >= 0, t >= 0.
TermCoefficients series_terms(const ProblemSpec& spec, int n, double t);

/**
 * @brief Closed-form series solution of the reaction-diffusion problem,
 *
 *   C(x,t) = C0 - (4 C0/pi) sum_n a_n cos(w_n x) (k psi_n (p-1) + p)
 *
 * evaluated through two mathematically identical rearrangements chosen by
 * r = (k + lambda_0) t:
 *  - r >= 1: transient-from-steady spectral form, whose terms carry
 *    exp(-(k+lambda_n)t) and decay super-geometrically;
 *  - r < 1: image form, C = Cinf - e^{-kt}(C0 - C1) + (4 C0 k/pi) sum a_n
 *    cos(w_n x) exp(-(k+lambda_n)t)/(k+lambda_n), with C1 the pure-diffusion
 *    solution summed over erfc images (the Poisson-summation dual, fast at
 *    small t) and an absolutely convergent O(n^-3) correction series.
 *
 * Both branches stop once a rigorous tail bound drops below opts.tail_tol and
 * throw NonConvergence when max_terms is exhausted first. At x = +-L every
 * cosine vanishes identically, so the boundary value C0 is returned exactly;
 * at t = 0 every image-form term vanishes, so the interior value is exactly 0.
 */
double reaction_diffusion_series(const ProblemSpec& spec, SpaceTimePoint pt,
                                 const SeriesOptions& opts = {});

/// Pure-diffusion slab solution (the k = 0 specialization, same code path):
/// C1 = C0 [1 - (4/pi) sum a_n cos(w_n x) exp(-de w_n^2 t)].
double pure_diffusion_series(const ProblemSpec& spec, SpaceTimePoint pt,
                             const SeriesOptions& opts = {});

/**
 * @brief Reaction-diffusion solution through the transform
 *
 *   C(x,t) = k * int_0^t C1(x,t') e^{-k t'} dt' + C1(x,t) e^{-kt}
 *
 * with C1 the pure-diffusion solution. The integral is evaluated by composite
 * Simpson on geometrically graded panels (quad_steps sub-intervals total; the
 * first panel is [0, t*1e-8]); uniform panels cannot resolve the wall-adjacent
 * rise of C1 at any practical step count. Reduces exactly to C1 at k = 0.
 */
double danckwerts_transform(const ProblemSpec& spec, SpaceTimePoint pt,
                            int quad_steps = 256, const SeriesOptions& opts = {});

/// Long-time limit C0 cosh(qx)/cosh(qL), q = sqrt(k/de); C0 when k = 0.
/// Evaluated in exponential form, stable for arbitrarily large qL.
double steady_state_profile(const ProblemSpec& spec, double x);

/// First-order decay c_init * exp(-k t).
double pure_reaction(double c_init, double k, double t);

}  // namespace rdlab::analytic
