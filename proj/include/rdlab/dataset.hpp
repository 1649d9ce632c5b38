#pragma once

#include <rdlab/problem.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <vector>

namespace rdlab::data {

enum class LabelSource { FiniteDifference, AnalyticSeries };
enum class NormMode { Standard, PaperExact };
enum class Split { Train, Validation, Test };

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Sampling bounds for the feature generator. x is implicit: it is drawn
/// after L and truncated to [-L, L] of the sampled L. t is specified in
/// years at this interface and stored in seconds in the features.
struct ParameterRanges {
    Interval c0{0.0, 200.0};
    Interval half_thickness{0.0, 0.05};  ///< open at 0
    Interval t_years{0.0, 7.0};
    Interval k{1e-10, 1e-1};
    Interval de{1e-13, 1e-1};

    void validate() const;
};

/// Feature tuple in SI units: (c0, L, x, t_seconds, k, de).
using Features = std::array<double, 6>;

struct Sample {
    Features features{};
    double label = 0.0;  ///< concentration, mol/m^3
    LabelSource source = LabelSource::FiniteDifference;
};

struct Batch {
    std::vector<Sample> samples;
};

/// Per-feature normalization statistics, computed on the training split only.
/// In PaperExact mode sigma_sq is the raw second moment and the normalized
/// value is (x - mu)/sigma_sq as printed; Standard mode is the usual z-score
/// with sigma_sq the (population) variance.
struct NormStats {
    std::array<double, 6> mu{};
    std::array<double, 6> sigma_sq{};
    NormMode mode = NormMode::Standard;
};

struct SplitIndices {
    std::vector<int> train, validation, test;
};

struct SplitSources {
    LabelSource train = LabelSource::FiniteDifference;
    LabelSource validation = LabelSource::FiniteDifference;
    LabelSource test = LabelSource::AnalyticSeries;
};

struct Dataset {
    std::vector<Batch> batches;
    SplitIndices splits;
    std::optional<NormStats> norm;
    ParameterRanges ranges;
    SplitSources sources;
    std::uint64_t seed = 0;
    int batch_size = 0;

    const std::vector<int>& split_indices(Split s) const;
    std::vector<Sample> gather(Split s) const;
    std::size_t total_samples() const;
};

/// One feature draw: c0, L, x, t from truncated Gaussians centered mid-range
/// (sigma = range/4, redrawn while out of bounds); k and de decade-stratified
/// (uniform integer decade, Gaussian-jittered fraction within the decade).
Features sample_parameters(std::mt19937_64& g, const ParameterRanges& ranges);

/// Label one feature tuple with the chosen oracle: a Crank-Nicolson solve
/// probed at (x, t), or the analytic series.
Sample label_sample(const Features& features, LabelSource source);

/// 90/5/5 batch-granularity split; validation and test get max(1, floor(5%))
/// batches each once n_batches >= 3.
SplitIndices make_splits(int n_batches);

/// Deterministic dataset generation: per-batch seeds are derived from the
/// base seed and batch index, so results are identical for any `jobs`.
Dataset generate(std::uint64_t seed, int n_batches, int batch_size,
                 const ParameterRanges& ranges = {}, SplitSources sources = {}, int jobs = 1);

NormStats compute_norm_stats(const Dataset& ds, NormMode mode);

Features normalize(const Features& raw, const NormStats& stats);
Features denormalize(const Features& normalized, const NormStats& stats);

/// Persist as CSV (header c0,L,x,t,k,de,c,source, %.17g) plus a sidecar
/// `<stem>.meta.json` holding seed, ranges, split indices and norm stats.
void save(const Dataset& ds, const std::filesystem::path& csv_path);

/// Load a dataset written by save(). Without the sidecar the rows are grouped
/// into batches of 3000 with default splits. Throws MalformedFile with the
/// offending line number on parse failure.
Dataset load(const std::filesystem::path& csv_path);

}  // namespace rdlab::data
