#pragma once

#include <rdlab/mlp.hpp>

#include <map>
#include <span>
#include <string>
#include <vector>

namespace rdlab::eval {

/// Accuracy summary of a model against one labeled set.
struct EvalReport {
    double mse = 0.0;                              ///< mol^2/m^6
    std::map<double, double> threshold_accuracy;   ///< theta (mol/m^3) -> percent
    std::size_t n = 0;
    std::string split;
};

/// Mean squared difference. Throws EmptyInput on empty or mismatched inputs.
double mse(std::span<const double> predictions, std::span<const double> targets);

/// 100 * |{i : |y_i - y'_i| < theta}| / n.
double threshold_accuracy(std::span<const double> predictions, std::span<const double> targets,
                          double theta);

/// One pass computing mse and the accuracy at every theta.
EvalReport evaluate(const mlp::Checkpoint& ckpt, const std::vector<data::Sample>& samples,
                    const std::vector<double>& thetas, std::string split_name = {});

enum class Regime { PureDiffusion, ReactionDiffusion, PureReaction };

struct DamkohlerRegime {
    double da = 0.0;
    Regime regime = Regime::ReactionDiffusion;
};

/// Decade cutoffs operationalizing Da << 1, ~ 1, >> 1.
struct RegimeThresholds {
    double diffusion = 0.1;
    double reaction = 10.0;
};

/// Da = k L^2 / de and its regime classification.
DamkohlerRegime damkohler(const ProblemSpec& spec, RegimeThresholds cutoffs = {});

struct DimensionlessGroups {
    double x_star = 0.0;   ///< x / L
    double t_star = 0.0;   ///< t / t_c
    double c_star = 0.0;   ///< C(x,t) / C0 from the series solution
    double fourier = 0.0;  ///< de t_c / L^2
    double k_t = 0.0;      ///< k t_c
};

DimensionlessGroups nondimensionalize(const ProblemSpec& spec, SpaceTimePoint pt, double t_c);

/// Analytic-labeled test lattice used by the sweeps: nx interior x-points
/// (the prescribed boundary values at +-L are not prediction targets) by nt
/// times spanning [0, t_max] inclusive.
std::vector<data::Sample> analytic_lattice(const ProblemSpec& spec, int nx = 21, int nt = 15,
                                           double t_max = 7.0 * kSecondsPerYear);

struct BatchSweepRow {
    int batches = 0;
    double train_mse = 0.0;
    double validation_mse = 0.0;
    double test_mse = 0.0;
    double thr2 = 0.0;  ///< percent at theta = 2
    double thr1 = 0.0;  ///< percent at theta = 1
};

/// Batch-count sensitivity study: one model per count on nested subsets
/// (batch features depend only on (seed, batch index), so smaller counts are
/// prefixes of larger ones), each with its own 90/5/5 split.
std::vector<BatchSweepRow> batch_sweep(std::uint64_t data_seed, const std::vector<int>& counts,
                                       int batch_size, const data::ParameterRanges& ranges,
                                       const mlp::NetworkConfig& config,
                                       data::SplitSources sources = {}, int jobs = 1);

enum class SweepField { K, De };

struct CoeffSweepRow {
    double value = 0.0;             ///< the swept coefficient
    double da = 0.0;                ///< Damkohler number of the row's spec
    double mse = 0.0;
    std::vector<double> thr_pct;    ///< aligned with the thetas argument
};

/// Holds every coefficient of `base` fixed except `field`, which takes each
/// of `values`; evaluates the checkpoint on an analytic-labeled lattice.
std::vector<CoeffSweepRow> coefficient_sweep(const ProblemSpec& base, SweepField field,
                                             const std::vector<double>& values,
                                             const mlp::Checkpoint& ckpt,
                                             const std::vector<double>& thetas = {2.0, 1.0, 0.5});

/// Damkohler variation study: fixed c0 = 75.5, L = 0.05, k = 2e-4 unless
/// overridden by `base`; rows sorted by Da descending.
std::vector<CoeffSweepRow> damkohler_sweep(const std::vector<double>& de_values,
                                           const mlp::Checkpoint& ckpt,
                                           const std::vector<double>& thetas = {0.5, 1.0, 2.0},
                                           const ProblemSpec& base = {2e-10, 2e-4, 75.5, 0.05});

/// CSV renderings (headers mirror the corresponding report tables;
/// percentages at two decimals).
std::string batch_sweep_csv(const std::vector<BatchSweepRow>& rows);
std::string coeff_sweep_csv(const std::vector<CoeffSweepRow>& rows, const std::string& value_name,
                            const std::vector<double>& thetas, bool include_mse);
std::string eval_report_csv(const std::vector<EvalReport>& reports);

}  // namespace rdlab::eval
