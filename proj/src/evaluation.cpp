#include <rdlab/analytic.hpp>
#include <rdlab/csvio.hpp>
#include <rdlab/errors.hpp>
#include <rdlab/evaluation.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rdlab::eval {

namespace {

std::string pct2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

data::Sample analytic_sample(const ProblemSpec& spec, double x, double t) {
    return data::label_sample({spec.c0, spec.half_thickness, x, t, spec.k, spec.de},
                              data::LabelSource::AnalyticSeries);
}

}  // namespace

double mse(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.empty() || predictions.size() != targets.size())
        throw EmptyInput("mse: inputs must be non-empty and of equal length");
    double acc = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        acc += (predictions[i] - targets[i]) * (predictions[i] - targets[i]);
    return acc / static_cast<double>(predictions.size());
}

double threshold_accuracy(std::span<const double> predictions, std::span<const double> targets,
                          double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("threshold_accuracy: theta must be > 0");
    if (predictions.empty() || predictions.size() != targets.size())
        throw EmptyInput("threshold_accuracy: inputs must be non-empty and of equal length");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        if (std::abs(predictions[i] - targets[i]) < theta) ++hits;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(predictions.size());
}

EvalReport evaluate(const mlp::Checkpoint& ckpt, const std::vector<data::Sample>& samples,
                    const std::vector<double>& thetas, std::string split_name) {
    if (samples.empty()) throw EmptyInput("evaluate: empty sample set");
    if (thetas.empty()) throw EmptyInput("evaluate: no thresholds given");
    std::vector<double> pred(samples.size()), target(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        pred[i] = mlp::predict(ckpt, samples[i].features);
        target[i] = samples[i].label;
    }
    EvalReport r;
    r.mse = mse(pred, target);
    for (double th : thetas) r.threshold_accuracy[th] = threshold_accuracy(pred, target, th);
    r.n = samples.size();
    r.split = std::move(split_name);
    return r;
}

DamkohlerRegime damkohler(const ProblemSpec& spec, RegimeThresholds cutoffs) {
    spec.validate();
    DamkohlerRegime out;
    out.da = spec.k * spec.half_thickness * spec.half_thickness / spec.de;
    if (out.da < cutoffs.diffusion)
        out.regime = Regime::PureDiffusion;
    else if (out.da > cutoffs.reaction)
        out.regime = Regime::PureReaction;
    else
        out.regime = Regime::ReactionDiffusion;
    return out;
}

DimensionlessGroups nondimensionalize(const ProblemSpec& spec, SpaceTimePoint pt, double t_c) {
    spec.validate();
    if (!(t_c > 0.0)) throw std::invalid_argument("nondimensionalize: t_c must be > 0");
    DimensionlessGroups g;
    g.x_star = pt.x / spec.half_thickness;
    g.t_star = pt.t / t_c;
    g.fourier = spec.de * t_c / (spec.half_thickness * spec.half_thickness);
    g.k_t = spec.k * t_c;
    if (spec.c0 > 0.0) {
        double c = analytic::reaction_diffusion_series(spec, pt, {60000, 1e-12 * spec.c0});
        g.c_star = c / spec.c0;
    }
    return g;
}

std::vector<data::Sample> analytic_lattice(const ProblemSpec& spec, int nx, int nt, double t_max) {
    spec.validate();
    if (nx < 1 || nt < 2) throw std::invalid_argument("analytic_lattice: need nx >= 1, nt >= 2");
    std::vector<data::Sample> out;
    out.reserve(static_cast<std::size_t>(nx) * nt);
    const double L = spec.half_thickness;
    for (int i = 0; i < nx; ++i) {
        // nx interior nodes of an (nx+2)-point closed lattice
        double x = -L + (i + 1) * 2.0 * L / (nx + 1);
        for (int j = 0; j < nt; ++j) {
            double t = t_max * j / (nt - 1);
            out.push_back(analytic_sample(spec, x, t));
        }
    }
    return out;
}

std::vector<BatchSweepRow> batch_sweep(std::uint64_t data_seed, const std::vector<int>& counts,
                                       int batch_size, const data::ParameterRanges& ranges,
                                       const mlp::NetworkConfig& config,
                                       data::SplitSources sources, int jobs) {
    if (counts.empty()) throw EmptyInput("batch_sweep: no batch counts");
    if (!std::is_sorted(counts.begin(), counts.end()))
        throw std::invalid_argument("batch_sweep: counts must be ascending");
    std::vector<BatchSweepRow> rows;
    for (int count : counts) {
        data::Dataset ds = data::generate(data_seed, count, batch_size, ranges, sources, jobs);
        ds.norm = data::compute_norm_stats(ds, data::NormMode::Standard);
        auto [ckpt, report] = mlp::train(ds, config);
        BatchSweepRow row;
        row.batches = count;
        std::vector<double> thetas{2.0, 1.0};
        EvalReport tr = evaluate(ckpt, ds.gather(data::Split::Train), thetas, "train");
        EvalReport va = evaluate(ckpt, ds.gather(data::Split::Validation), thetas, "validation");
        EvalReport te = evaluate(ckpt, ds.gather(data::Split::Test), thetas, "test");
        row.train_mse = tr.mse;
        row.validation_mse = va.mse;
        row.test_mse = te.mse;
        row.thr2 = te.threshold_accuracy.at(2.0);
        row.thr1 = te.threshold_accuracy.at(1.0);
        rows.push_back(row);
    }
    return rows;
}

std::vector<CoeffSweepRow> coefficient_sweep(const ProblemSpec& base, SweepField field,
                                             const std::vector<double>& values,
                                             const mlp::Checkpoint& ckpt,
                                             const std::vector<double>& thetas) {
    if (values.empty()) throw EmptyInput("coefficient_sweep: no values");
    for (double v : values)
        if (!(v > 0.0)) throw std::invalid_argument("coefficient_sweep: values must be positive");
    std::vector<CoeffSweepRow> rows;
    for (double v : values) {
        ProblemSpec spec = base;
        (field == SweepField::K ? spec.k : spec.de) = v;
        std::vector<data::Sample> lattice = analytic_lattice(spec);
        EvalReport rep = evaluate(ckpt, lattice, thetas);
        CoeffSweepRow row;
        row.value = v;
        row.da = damkohler(spec).da;
        row.mse = rep.mse;
        for (double th : thetas) row.thr_pct.push_back(rep.threshold_accuracy.at(th));
        rows.push_back(row);
    }
    return rows;
}

std::vector<CoeffSweepRow> damkohler_sweep(const std::vector<double>& de_values,
                                           const mlp::Checkpoint& ckpt,
                                           const std::vector<double>& thetas,
                                           const ProblemSpec& base) {
    std::vector<CoeffSweepRow> rows = coefficient_sweep(base, SweepField::De, de_values, ckpt, thetas);
    std::sort(rows.begin(), rows.end(),
              [](const CoeffSweepRow& a, const CoeffSweepRow& b) { return a.da > b.da; });
    return rows;
}

std::string batch_sweep_csv(const std::vector<BatchSweepRow>& rows) {
    std::ostringstream os;
    os << "batches,train_mse,validation_mse,test_mse,thr2_pct,thr1_pct\n";
    for (const BatchSweepRow& r : rows)
        os << r.batches << ',' << io::format_g17(r.train_mse) << ','
           << io::format_g17(r.validation_mse) << ',' << io::format_g17(r.test_mse) << ','
           << pct2(r.thr2) << ',' << pct2(r.thr1) << '\n';
    return os.str();
}

std::string coeff_sweep_csv(const std::vector<CoeffSweepRow>& rows, const std::string& value_name,
                            const std::vector<double>& thetas, bool include_mse) {
    std::ostringstream os;
    os << value_name << ",da";
    if (include_mse) os << ",mse";
    for (double th : thetas) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), ",thr%g_pct", th);
        os << buf;
    }
    os << '\n';
    for (const CoeffSweepRow& r : rows) {
        os << io::format_g17(r.value) << ',' << io::format_g17(r.da);
        if (include_mse) os << ',' << io::format_g17(r.mse);
        for (double p : r.thr_pct) os << ',' << pct2(p);
        os << '\n';
    }
    return os.str();
}

std::string eval_report_csv(const std::vector<EvalReport>& reports) {
    std::ostringstream os;
    os << "split,n,mse";
    if (!reports.empty())
        for (const auto& [th, pct] : reports.front().threshold_accuracy) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), ",thr%g_pct", th);
            os << buf;
        }
    os << '\n';
    for (const EvalReport& r : reports) {
        os << r.split << ',' << r.n << ',' << io::format_g17(r.mse);
        for (const auto& [th, pct] : r.threshold_accuracy) os << ',' << pct2(pct);
        os << '\n';
    }
    return os.str();
}

}  // namespace rdlab::eval
