// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is the failure count.
//
// Heavy artifacts (sweep tables, training history) are written to
// ./acceptance_out for inspection.

#include <rdlab/analytic.hpp>
#include <rdlab/dataset.hpp>
#include <rdlab/errors.hpp>
#include <rdlab/evaluation.hpp>
#include <rdlab/fd.hpp>
#include <rdlab/mlp.hpp>
#include <rdlab/rng.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace rdlab;
namespace fs = std::filesystem;

namespace {

const ProblemSpec kBaseline{2.6e-9, 2.125e-7, 75.5, 0.05};
constexpr double kYear = kSecondsPerYear;
const fs::path kOutDir = "acceptance_out";

constexpr std::uint64_t kDeskDataSeed = 2024;

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

data::ParameterRanges desk_ranges() {
    data::ParameterRanges r;
    r.c0 = {50.0, 100.0};
    r.k = {1e-8, 1e-6};
    r.de = {1e-10, 1e-8};
    return r;
}

mlp::NetworkConfig desk_config() {
    mlp::NetworkConfig cfg;
    cfg.layer_sizes = {6, 64, 64, 32, 1};
    cfg.lambda = 1e-4;
    cfg.epochs = 80;
    cfg.seed = 7;
    cfg.batch_size = 128;
    return cfg;
}

// ----------------------------------------------------------------------------
// 1. Oracle triangle
// ----------------------------------------------------------------------------
bool oracle_triangle(std::string& detail) {
    const double t0 = now_seconds();
    fd::SolutionField field =
        fd::solve(kBaseline, fd::Grid::make(201, 2000, 7.0 * kYear, kBaseline.half_thickness));
    double worst_fd = 0.0, worst_dk = 0.0;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            double x = -0.05 + i * 0.1 / 9.0;
            double t = j * 7.0 * kYear / 9.0;
            double series = analytic::reaction_diffusion_series(kBaseline, {x, t});
            worst_fd = std::max(worst_fd, std::abs(series - field.probe(x, t)));
            int steps = std::max(256, static_cast<int>(256.0 * t / kYear));
            double transform = analytic::danckwerts_transform(kBaseline, {x, t}, steps);
            worst_dk = std::max(worst_dk, std::abs(series - transform));
        }
    }
    const double elapsed = now_seconds() - t0;
    std::ostringstream os;
    os << "max|series-CN|/C0 = " << worst_fd / 75.5 << " (tol 5e-3), max|series-Danckwerts|/C0 = "
       << worst_dk / 75.5 << " (tol 1e-5), " << elapsed << " s (limit 30)";
    detail = os.str();
    return worst_fd < 0.005 * 75.5 && worst_dk < 1e-5 * 75.5 && elapsed < 30.0;
}

// ----------------------------------------------------------------------------
// 2. IC/BC exactness
// ----------------------------------------------------------------------------
bool ic_bc_exactness(std::string& detail) {
    bool walls_exact = true;
    for (double t : {0.0, 0.3 * kYear, 2.0 * kYear, 7.0 * kYear}) {
        walls_exact = walls_exact &&
                      analytic::reaction_diffusion_series(kBaseline, {0.05, t}) == 75.5 &&
                      analytic::reaction_diffusion_series(kBaseline, {-0.05, t}) == 75.5;
    }
    double worst = 0.0;
    for (int i = 0; i <= 40; ++i) {
        double x = -0.95 * 0.05 + i * 1.9 * 0.05 / 40.0;
        worst = std::max(
            worst, std::abs(analytic::reaction_diffusion_series(kBaseline, {x, 0.0}, {500, {}})));
    }
    std::ostringstream os;
    os << "walls " << (walls_exact ? "exact" : "NOT exact") << ", max|series(t=0)| = " << worst
       << " (tol " << 1e-4 * 75.5 << ")";
    detail = os.str();
    return walls_exact && worst < 1e-4 * 75.5;
}

// ----------------------------------------------------------------------------
// 3. Steady state
// ----------------------------------------------------------------------------
bool steady_state(std::string& detail) {
    double worst = 0.0;
    for (int i = 0; i < 21; ++i) {
        double x = -0.05 + i * 0.1 / 20.0;
        double series = analytic::reaction_diffusion_series(kBaseline, {x, 1e9});
        double cosh_profile = analytic::steady_state_profile(kBaseline, x);
        worst = std::max(worst, std::abs(series - cosh_profile) / cosh_profile);
    }
    std::ostringstream os;
    os << "max relative deviation over 21 x-points = " << worst << " (tol 1e-4)";
    detail = os.str();
    return worst < 1e-4;
}

// ----------------------------------------------------------------------------
// 4. FD convergence order
// ----------------------------------------------------------------------------
bool fd_order(std::string& detail) {
    const double t0 = now_seconds();
    double o_rd = fd::observed_order(kBaseline, 51, kYear);
    ProblemSpec diffusion = kBaseline;
    diffusion.k = 0.0;
    double o_d = fd::observed_order(diffusion, 51, 1.6 / diffusion.lambda0());
    const double elapsed = now_seconds() - t0;
    std::ostringstream os;
    os << "order(reaction-diffusion) = " << o_rd << ", order(pure diffusion) = " << o_d
       << " (band [1.7, 2.3]), " << elapsed << " s (limit 120)";
    detail = os.str();
    auto in_band = [](double o) { return o >= 1.7 && o <= 2.3; };
    return in_band(o_rd) && in_band(o_d) && elapsed < 120.0;
}

// ----------------------------------------------------------------------------
// 5. Gradient correctness
// ----------------------------------------------------------------------------
bool gradient_correctness(std::string& detail) {
    std::mt19937_64 g(4242);
    const int m = 20;
    std::vector<double> x(m * 6), y(m);
    for (double& v : x) v = 2.0 * rng::uniform01(g) - 1.0;
    for (double& v : y) v = rng::uniform01(g);

    double worst = 0.0;
    for (const std::vector<int>& arch :
         {std::vector<int>{6, 8, 1}, std::vector<int>{6, 64, 64, 32, 1}}) {
        mlp::NetworkConfig cfg;
        cfg.layer_sizes = arch;
        cfg.seed = 99;
        std::mt19937_64 ig(cfg.seed);
        mlp::NetworkParams params = mlp::init_params(cfg, ig);
        worst = std::max(worst, mlp::grad_check(params, x, m, y, 1e-4, 1e-6));
    }
    std::ostringstream os;
    os << "max relative gradient error = " << worst << " (tol 1e-5)";
    detail = os.str();
    return worst < 1e-5;
}

// ----------------------------------------------------------------------------
// 6. Desk-scale training
// ----------------------------------------------------------------------------
bool desk_training(std::string& detail) {
    const double t0 = now_seconds();
    data::Dataset ds = data::generate(kDeskDataSeed, 100, 1000, desk_ranges());
    ds.norm = data::compute_norm_stats(ds, data::NormMode::Standard);
    auto [ckpt, report] = mlp::train(ds, desk_config());
    mlp::save_checkpoint(ckpt, kOutDir / "desk_model.json");
    {
        std::ofstream hist(kOutDir / "desk_history.csv");
        hist << "epoch,train_loss,validation_loss\n";
        for (std::size_t e = 0; e < report.train_loss.size(); ++e)
            hist << e << ',' << report.train_loss[e] << ',' << report.validation_loss[e] << '\n';
    }

    eval::EvalReport test =
        eval::evaluate(ckpt, ds.gather(data::Split::Test), {1.0, 2.0}, "test");
    const double thr2 = test.threshold_accuracy.at(2.0);
    const double thr1 = test.threshold_accuracy.at(1.0);

    // best validation loss must fall by at least 10x from the initial params
    double best_val = report.validation_loss[report.best_epoch >= 0 ? report.best_epoch : 0];
    bool val_drop = best_val <= report.initial_validation_loss / 10.0;

    // 5-epoch moving average of the training loss is non-increasing (1%)
    bool smooth_ok = true;
    std::vector<double> ma;
    for (std::size_t e = 4; e < report.train_loss.size(); ++e) {
        double s = 0.0;
        for (std::size_t i = e - 4; i <= e; ++i) s += report.train_loss[i];
        ma.push_back(s / 5.0);
    }
    for (std::size_t i = 1; i < ma.size(); ++i)
        smooth_ok = smooth_ok && ma[i] <= ma[i - 1] * 1.01;

    const double elapsed = now_seconds() - t0;
    std::ostringstream os;
    os << "Thr(2) = " << thr2 << "% (floor 80), Thr(1) = " << thr1 << "% (floor 70), test MSE = "
       << test.mse << ", best val " << best_val << " vs initial/10 "
       << report.initial_validation_loss / 10.0 << ", smoothed train loss "
       << (smooth_ok ? "non-increasing" : "INCREASING") << ", " << elapsed << " s (limit 1800)";
    detail = os.str();
    return thr2 >= 80.0 && thr1 >= 70.0 && val_drop && smooth_ok && elapsed < 1800.0;
}

// ----------------------------------------------------------------------------
// 7. Batch-count trend
// ----------------------------------------------------------------------------
bool batch_trend(std::string& detail) {
    mlp::NetworkConfig cfg = desk_config();
    cfg.epochs = 30;
    auto rows = eval::batch_sweep(kDeskDataSeed, {10, 30, 100}, 1000, desk_ranges(), cfg);
    std::ofstream(kOutDir / "batch_sweep.csv") << eval::batch_sweep_csv(rows);
    bool ok = true;
    for (std::size_t i = 1; i < rows.size(); ++i)
        ok = ok && rows[i].test_mse <= rows[i - 1].test_mse * 1.10;
    std::ostringstream os;
    os << "test MSE: ";
    for (const auto& r : rows) os << r.batches << "->" << r.test_mse << " ";
    os << "(each step within 1.10x of the previous)";
    detail = os.str();
    return ok;
}

// ----------------------------------------------------------------------------
// 8. Damkohler-variation trend
// ----------------------------------------------------------------------------
bool damkohler_trend(std::string& detail) {
    data::ParameterRanges ranges = desk_ranges();
    ranges.k = {1e-5, 1e-3};    // covers the study's k = 2e-4
    ranges.de = {1e-15, 1e-9};  // covers the swept de decades
    data::SplitSources sources{data::LabelSource::AnalyticSeries,
                               data::LabelSource::AnalyticSeries,
                               data::LabelSource::AnalyticSeries};
    data::Dataset ds = data::generate(77, 60, 1000, ranges, sources);
    ds.norm = data::compute_norm_stats(ds, data::NormMode::Standard);
    mlp::NetworkConfig cfg = desk_config();
    cfg.epochs = 60;
    auto [ckpt, report] = mlp::train(ds, cfg);
    mlp::save_checkpoint(ckpt, kOutDir / "damkohler_model.json");

    auto rows = eval::damkohler_sweep({2e-14, 2e-13, 2e-12, 2e-11, 2e-10}, ckpt);
    std::ofstream(kOutDir / "damkohler_sweep.csv")
        << eval::coeff_sweep_csv(rows, "de", {0.5, 1.0, 2.0}, true);

    // rows are ordered by Da descending = de ascending
    bool increasing = true;
    for (std::size_t i = 1; i < rows.size(); ++i)
        increasing = increasing && rows[i].mse > rows[i - 1].mse;
    std::ostringstream os;
    os << "MSE by de: ";
    for (const auto& r : rows) os << r.value << "->" << r.mse << " ";
    os << (increasing ? "(strictly increasing)" : "(NOT increasing)");
    detail = os.str();
    return increasing;
}

// ----------------------------------------------------------------------------
// 9. Metric and pipeline properties
// ----------------------------------------------------------------------------
bool metric_properties(std::string& detail) {
    std::ostringstream os;
    bool ok = true;

    {  // threshold accuracy monotone in theta
        std::mt19937_64 g(31);
        std::vector<double> pred(300), target(300);
        for (int i = 0; i < 300; ++i) {
            target[i] = 20.0 * rng::uniform01(g);
            pred[i] = target[i] + 4.0 * (rng::uniform01(g) - 0.5);
        }
        double prev = 0.0;
        for (double th : {0.05, 0.2, 0.5, 1.0, 2.0, 5.0}) {
            double acc = eval::threshold_accuracy(pred, target, th);
            ok = ok && acc >= prev;
            prev = acc;
        }
        os << "threshold monotonicity " << (ok ? "ok" : "VIOLATED");
    }

    {  // mse = 0 <=> 100% accuracy
        std::vector<double> a{1.0, 2.0, 3.0}, b{1.0, 2.0, 3.1};
        bool iff = eval::mse(a, a) == 0.0 && eval::threshold_accuracy(a, a, 1e-12) == 100.0 &&
                   eval::mse(a, b) > 0.0 && eval::threshold_accuracy(a, b, 0.1) < 100.0;
        ok = ok && iff;
        os << ", mse-iff-100% " << (iff ? "ok" : "VIOLATED");
    }

    {  // Damkohler scaling invariance
        bool inv = true;
        std::mt19937_64 g(17);
        for (int i = 0; i < 50; ++i) {
            double s = 0.25 + 8.0 * rng::uniform01(g);
            double da0 = eval::damkohler(kBaseline).da;
            ProblemSpec scaled{kBaseline.de * s * s, kBaseline.k, kBaseline.c0,
                               kBaseline.half_thickness * s};
            inv = inv && std::abs(eval::damkohler(scaled).da - da0) <= 1e-12 * da0;
        }
        ok = ok && inv;
        os << ", Da scaling " << (inv ? "ok" : "VIOLATED");
    }

    {  // normalization round trip < 1e-12
        data::Dataset ds = data::generate(5, 20, 10, desk_ranges());
        bool rt = true;
        for (data::NormMode mode : {data::NormMode::Standard, data::NormMode::PaperExact}) {
            data::NormStats st = data::compute_norm_stats(ds, mode);
            std::mt19937_64 g(3);
            data::ParameterRanges full;
            for (int i = 0; i < 2000; ++i) {
                data::Features f = data::sample_parameters(g, full);
                data::Features back = data::denormalize(data::normalize(f, st), st);
                for (int j = 0; j < 6; ++j)
                    rt = rt && std::abs(back[j] - f[j]) <=
                                   1e-12 * std::max(std::abs(f[j]), std::sqrt(st.sigma_sq[j]));
            }
        }
        ok = ok && rt;
        os << ", norm round-trip " << (rt ? "ok" : "VIOLATED");
    }

    {  // dataset determinism, byte-exact
        fs::path a = kOutDir / "det_a.csv", b = kOutDir / "det_b.csv";
        data::save(data::generate(99, 6, 8, desk_ranges()), a);
        data::save(data::generate(99, 6, 8, desk_ranges()), b);
        auto slurp = [](const fs::path& p) {
            std::ifstream is(p, std::ios::binary);
            return std::string((std::istreambuf_iterator<char>(is)),
                               std::istreambuf_iterator<char>());
        };
        bool det = slurp(a) == slurp(b) && !slurp(a).empty();
        ok = ok && det;
        os << ", dataset determinism " << (det ? "byte-exact" : "VIOLATED");
    }

    detail = os.str();
    return ok;
}

// ----------------------------------------------------------------------------
// 10. Dimensionless equivalence
// ----------------------------------------------------------------------------
bool dimensionless_equivalence(std::string& detail) {
    double worst = 0.0;
    std::mt19937_64 g(23);
    for (int i = 0; i < 40; ++i) {
        double s = 1.0 + 3.0 * rng::uniform01(g);
        ProblemSpec a{2.6e-9 * (0.5 + rng::uniform01(g)), 2.125e-7 * (0.5 + rng::uniform01(g)),
                      75.5, 0.05};
        ProblemSpec b{a.de * s * s, a.k, a.c0, a.half_thickness * s};
        double xf = 0.9 * (2.0 * rng::uniform01(g) - 1.0);
        double t = (0.05 + 4.0 * rng::uniform01(g)) * kYear;
        // identical (de t / L^2, k t) at identical x/L by construction
        double ca = analytic::reaction_diffusion_series(a, {xf * a.half_thickness, t}) / a.c0;
        double cb = analytic::reaction_diffusion_series(b, {xf * b.half_thickness, t}) / b.c0;
        double scale = std::max({std::abs(ca), std::abs(cb), 1e-30});
        worst = std::max(worst, std::abs(ca - cb) / scale);
    }
    std::ostringstream os;
    os << "max relative C/C0 mismatch over 40 rescaled pairs = " << worst << " (tol 1e-12)";
    detail = os.str();
    return worst < 1e-12;
}

}  // namespace

int main() {
    fs::create_directories(kOutDir);
    struct Criterion {
        int number;
        const char* label;
        bool (*body)(std::string&);
    };
    const Criterion criteria[] = {
        {1, "oracle triangle (series vs CN vs Danckwerts)", oracle_triangle},
        {2, "IC/BC exactness", ic_bc_exactness},
        {3, "steady-state cosh profile", steady_state},
        {4, "FD convergence order", fd_order},
        {5, "gradient correctness", gradient_correctness},
        {6, "desk-scale training thresholds", desk_training},
        {7, "batch-count trend", batch_trend},
        {8, "Damkohler-variation trend", damkohler_trend},
        {9, "metric and pipeline properties", metric_properties},
        {10, "dimensionless equivalence", dimensionless_equivalence},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::string detail;
        bool ok = false;
        const double t0 = now_seconds();
        try {
            ok = c.body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double dt = now_seconds() - t0;
        std::printf("[%s] criterion %2d: %s — %s [%.1f s]\n", ok ? "PASS" : "FAIL", c.number,
                    c.label, detail.c_str(), dt);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures;
}
