#include <rdlab/analytic.hpp>
#include <rdlab/errors.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace rdlab::analytic {

namespace {

void check_point(const ProblemSpec& spec, SpaceTimePoint pt) {
    spec.validate();
    if (!(std::abs(pt.x) <= spec.half_thickness))
        throw OutOfDomain("x = " + std::to_string(pt.x) + " outside [-L, L], L = " +
                          std::to_string(spec.half_thickness));
    if (!(pt.t >= 0.0)) throw OutOfDomain("t must be >= 0");
}

void check_options(const SeriesOptions& opts) {
    if (opts.max_terms < 1) throw std::invalid_argument("SeriesOptions: max_terms must be >= 1");
    if (opts.tail_tol && !(*opts.tail_tol >= 0.0))
        throw std::invalid_argument("SeriesOptions: tail_tol must be >= 0");
}

/// cosh(qx)/cosh(qL) in overflow-safe exponential form.
double steady_value(double c0, double L, double de, double k, double x) {
    if (k == 0.0) return c0;
    double q = std::sqrt(k / de);
    double a = q * std::abs(x);
    double b = q * L;
    return c0 * std::exp(a - b) * (1.0 + std::exp(-2.0 * a)) / (1.0 + std::exp(-2.0 * b));
}

/// Pure-diffusion slab solution by the method of images. Accurate and cheap
/// for lambda_0 t <~ 1 (the only regime in which it is called).
double diffusion_images(double c0, double L, double de, double x, double t) {
    double s = 2.0 * std::sqrt(de * t);
    double acc = 0.0;
    double sign = 1.0;
    for (int j = 0; j < 24; ++j) {
        double inc = std::erfc(((2 * j + 1) * L - x) / s) + std::erfc(((2 * j + 1) * L + x) / s);
        acc += sign * inc;
        if (inc < 1e-18 && j > 2) break;
        sign = -sign;
    }
    return c0 * acc;
}

/// Shared evaluator for the closed-form series (k = 0 gives pure diffusion).
double series_value(const ProblemSpec& spec, SpaceTimePoint pt, const SeriesOptions& opts,
                    double k) {
    const double c0 = spec.c0;
    const double L = spec.half_thickness;
    const double de = spec.de;
    const double x = pt.x;
    const double t = pt.t;

    // Every cosine vanishes at the walls; the series value there is C0 for all t.
    if (std::abs(x) == L) return c0;
    // Every image-form term vanishes at t = 0; the interior value is exactly 0.
    if (t == 0.0 || c0 == 0.0) return 0.0;

    const double w0 = M_PI / (2.0 * L);
    const double lam0 = de * w0 * w0;
    const double pref = 4.0 * c0 / M_PI;
    const double tol = opts.resolved_tail_tol(c0);
    const double r = (k + lam0) * t;

    double value;
    if (r >= 1.0) {
        // Transient-from-steady spectral form.
        double acc = 0.0;
        double sign = 1.0;
        int n = 0;
        bool converged = false;
        while (n < opts.max_terms) {
            double m = 2.0 * n + 1.0;
            double w = m * w0;
            double lam = de * w * w;
            acc += sign / m * std::cos(w * x) * std::exp(-(k + lam) * t) * lam / (k + lam);
            sign = -sign;
            double m1 = m + 2.0;
            double lam1 = de * (m1 * w0) * (m1 * w0);
            double gap = 8.0 * (n + 2.0) * lam0 * t;
            double geom = 1.0 / -std::expm1(-gap);
            double tail = pref * std::exp(-(k + lam1) * t) / m1 * geom;
            ++n;
            if (tail <= tol) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw NonConvergence("series tail above tail_tol after " + std::to_string(n) +
                                     " terms (spectral form)",
                                 n);
        value = steady_value(c0, L, de, k, x) - pref * acc;
    } else {
        // Image form with the absolutely convergent O(n^-3) correction series.
        double corr = 0.0;
        double sign = 1.0;
        int n = 0;
        bool converged = (k == 0.0);
        while (!converged && n < opts.max_terms) {
            double m = 2.0 * n + 1.0;
            double w = m * w0;
            double lam = de * w * w;
            corr += sign / m * std::cos(w * x) * std::exp(-(k + lam) * t) / (k + lam);
            sign = -sign;
            double m1 = m + 2.0;
            double lam1 = de * (m1 * w0) * (m1 * w0);
            double tail = c0 * k * std::exp(-(k + lam1) * t) / (M_PI * lam0 * m * m);
            ++n;
            if (tail <= tol) converged = true;
        }
        if (!converged)
            throw NonConvergence("series tail above tail_tol after " + std::to_string(n) +
                                     " terms (image form)",
                                 n);
        value = steady_value(c0, L, de, k, x) -
                std::exp(-k * t) * (c0 - diffusion_images(c0, L, de, x, t)) +
                pref * k * corr;
    }

    // Physical bounds: report real violations, absorb roundoff-level ones.
    if (value < -1e-9 * c0 || value > c0 * (1.0 + 1e-9))
        throw std::logic_error("series value " + std::to_string(value) +
                               " outside [0, C0] beyond roundoff");
    return std::clamp(value, 0.0, c0);
}

}  // namespace

TermCoefficients series_terms(const ProblemSpec& spec, int n, double t) {
    spec.validate();
    if (n < 0) throw std::invalid_argument("series_terms: n must be >= 0");
    if (!(t >= 0.0)) throw std::invalid_argument("series_terms: t must be >= 0");
    const double L = spec.half_thickness;
    const double m = 2.0 * n + 1.0;
    TermCoefficients c;
    c.a_n = ((n % 2 == 0) ? 1.0 : -1.0) / m;
    c.omega_n = m * M_PI / (2.0 * L);
    c.psi_n = 4.0 * L * L / (-spec.de * m * m * M_PI * M_PI - 4.0 * spec.k * L * L);
    c.p = std::exp(t / c.psi_n);
    return c;
}

double reaction_diffusion_series(const ProblemSpec& spec, SpaceTimePoint pt,
                                 const SeriesOptions& opts) {
    check_point(spec, pt);
    check_options(opts);
    return series_value(spec, pt, opts, spec.k);
}

double pure_diffusion_series(const ProblemSpec& spec, SpaceTimePoint pt,
                             const SeriesOptions& opts) {
    check_point(spec, pt);
    check_options(opts);
    return series_value(spec, pt, opts, 0.0);
}

double danckwerts_transform(const ProblemSpec& spec, SpaceTimePoint pt, int quad_steps,
                            const SeriesOptions& opts) {
    check_point(spec, pt);
    check_options(opts);
    if (quad_steps < 8) throw std::invalid_argument("danckwerts_transform: quad_steps must be >= 8");
    const double k = spec.k;
    const double t = pt.t;
    // Exact reductions: no reaction, or nothing has happened yet.
    if (k == 0.0 || t == 0.0) return pure_diffusion_series(spec, pt, opts);

    auto c1 = [&](double tau) {
        return pure_diffusion_series(spec, {pt.x, tau}, opts) * std::exp(-k * tau);
    };

    // Geometrically graded panels from t*eps up to t; 3-point Simpson each.
    const int panels = quad_steps / 2;
    const double eps = 1e-8;
    const double ratio = std::pow(1.0 / eps, 1.0 / (panels - 1));
    double integral = 0.0;
    double a = 0.0;
    double fa = 0.0;  // C1(x, 0) e^0 = 0 in the interior, c0 at the walls
    if (std::abs(pt.x) == spec.half_thickness) fa = spec.c0;
    double b = t * eps;
    for (int j = 0; j < panels; ++j) {
        if (j == panels - 1) b = t;
        double fm = c1(0.5 * (a + b));
        double fb = c1(b);
        integral += (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        a = b;
        fa = fb;
        b *= ratio;
    }
    return k * integral + c1(t);
}

double steady_state_profile(const ProblemSpec& spec, double x) {
    spec.validate();
    if (!(std::abs(x) <= spec.half_thickness))
        throw OutOfDomain("steady_state_profile: x outside [-L, L]");
    return steady_value(spec.c0, spec.half_thickness, spec.de, spec.k, x);
}

double pure_reaction(double c_init, double k, double t) {
    if (!(c_init >= 0.0)) throw std::invalid_argument("pure_reaction: c_init must be >= 0");
    if (!(k >= 0.0)) throw std::invalid_argument("pure_reaction: k must be >= 0");
    if (!(t >= 0.0)) throw std::invalid_argument("pure_reaction: t must be >= 0");
    return c_init * std::exp(-k * t);
}

}  // namespace rdlab::analytic
