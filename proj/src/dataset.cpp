#include <rdlab/analytic.hpp>
#include <rdlab/csvio.hpp>
#include <rdlab/dataset.hpp>
#include <rdlab/errors.hpp>
#include <rdlab/fd.hpp>
#include <rdlab/rng.hpp>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

namespace rdlab::data {

namespace {

using nlohmann::json;

/// Decade-stratified log-domain draw for k and de: a uniform integer decade
/// keeps the small-magnitude decades populated across 9-12 orders of
/// magnitude, and a Gaussian-jittered fraction within the decade keeps the
/// draw Gaussian-flavored. Ranges are decade-aligned.
double sample_log_decades(std::mt19937_64& g, const Interval& iv) {
    const long dlo = std::lround(std::log10(iv.lo));
    const long dhi = std::lround(std::log10(iv.hi));
    const long decade = dlo + static_cast<long>(rng::uniform_below(g, dhi - dlo));
    double frac = rng::truncated_normal(g, 0.0, 1.0);
    if (frac >= 1.0) frac = std::nextafter(1.0, 0.0);
    double v = std::pow(10.0, static_cast<double>(decade) + frac);
    return std::min(std::max(v, iv.lo), iv.hi);
}

constexpr const char* kCsvHeader = "c0,L,x,t,k,de,c,source";
constexpr int kMetaFormatVersion = 1;

std::string source_token(LabelSource s) {
    return s == LabelSource::FiniteDifference ? "fd" : "series";
}

LabelSource parse_source(const std::string& tok, long line) {
    if (tok == "fd") return LabelSource::FiniteDifference;
    if (tok == "series") return LabelSource::AnalyticSeries;
    throw MalformedFile("unknown label source '" + tok + "'", line);
}

json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

Interval interval_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw MalformedFile("bad interval in meta sidecar");
    return {j[0].get<double>(), j[1].get<double>()};
}

/// FD label grid: nx = 201, dt <= horizon/400, tightened when the reaction
/// term is stiff (Crank-Nicolson oscillates for k*dt >> 2). The step cap
/// keeps extreme full-range draws affordable; the residual loss of near-wall
/// accuracy there is documented in the README.
fd::Grid label_grid(const ProblemSpec& spec, double horizon) {
    long nt = 400;
    double stiff = 2.0 * spec.k * horizon;
    if (stiff > nt) nt = std::min(static_cast<long>(stiff) + 1, 40000L);
    return fd::Grid::make(201, nt, horizon, spec.half_thickness);
}

double analytic_label(const ProblemSpec& spec, SpaceTimePoint pt) {
    try {
        return analytic::reaction_diffusion_series(spec, pt, {40000, 1e-9 * spec.c0});
    } catch (const NonConvergence&) {
    }
    try {
        return analytic::reaction_diffusion_series(spec, pt, {40000, 1e-5 * spec.c0});
    } catch (const NonConvergence&) {
    }
    // Extreme-Damkohler, sub-minute-t corner: fall back to the transform
    // representation, which is the same analytical construction.
    return analytic::danckwerts_transform(spec, pt, 4096, {40000, 1e-9 * spec.c0});
}

double clamp_label(double v, double c0) { return std::min(std::max(v, 0.0), c0); }

/// Labels one batch in place. FD solves are shared between samples with the
/// same (c0, L, k, de), with the horizon covering the largest t in the group.
void label_batch(std::vector<Sample>& samples, LabelSource source) {
    if (source == LabelSource::AnalyticSeries) {
        for (Sample& s : samples) {
            ProblemSpec spec{s.features[5], s.features[4], s.features[0], s.features[1]};
            s.label = clamp_label(analytic_label(spec, {s.features[2], s.features[3]}), spec.c0);
            s.source = source;
        }
        return;
    }
    using Key = std::tuple<double, double, double, double>;
    std::map<Key, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Features& f = samples[i].features;
        groups[{f[0], f[1], f[4], f[5]}].push_back(i);
    }
    for (auto& [key, idx] : groups) {
        double horizon = 0.0;
        for (std::size_t i : idx) horizon = std::max(horizon, samples[i].features[3]);
        const Features& f0 = samples[idx.front()].features;
        ProblemSpec spec{f0[5], f0[4], f0[0], f0[1]};
        if (horizon == 0.0) {
            for (std::size_t i : idx) {
                double x = samples[i].features[2];
                samples[i].label = (std::abs(x) == spec.half_thickness) ? spec.c0 : 0.0;
                samples[i].source = source;
            }
            continue;
        }
        fd::SolutionField field = fd::solve(spec, label_grid(spec, horizon));
        for (std::size_t i : idx) {
            samples[i].label =
                clamp_label(field.probe(samples[i].features[2], samples[i].features[3]), spec.c0);
            samples[i].source = source;
        }
    }
}

Batch make_batch(std::uint64_t batch_seed, int batch_size, const ParameterRanges& ranges,
                 LabelSource source) {
    Batch b;
    b.samples.resize(batch_size);
    std::mt19937_64 g(batch_seed);
    for (Sample& s : b.samples) s.features = sample_parameters(g, ranges);
    label_batch(b.samples, source);
    return b;
}

}  // namespace

void ParameterRanges::validate() const {
    auto ordered = [](const Interval& iv) { return iv.lo <= iv.hi; };
    if (!ordered(c0) || !ordered(half_thickness) || !ordered(t_years) || !ordered(k) ||
        !ordered(de))
        throw std::invalid_argument("ParameterRanges: lo must be <= hi");
    if (!(c0.lo >= 0.0) || !(t_years.lo >= 0.0))
        throw std::invalid_argument("ParameterRanges: c0 and t must be non-negative");
    if (!(half_thickness.hi > 0.0))
        throw std::invalid_argument("ParameterRanges: half_thickness upper bound must be > 0");
    if (!(k.lo > 0.0) || !(de.lo > 0.0))
        throw std::invalid_argument("ParameterRanges: k and de bounds must be > 0");
}

const std::vector<int>& Dataset::split_indices(Split s) const {
    switch (s) {
        case Split::Train: return splits.train;
        case Split::Validation: return splits.validation;
        default: return splits.test;
    }
}

std::vector<Sample> Dataset::gather(Split s) const {
    std::vector<Sample> out;
    for (int b : split_indices(s))
        out.insert(out.end(), batches[b].samples.begin(), batches[b].samples.end());
    return out;
}

std::size_t Dataset::total_samples() const {
    std::size_t n = 0;
    for (const Batch& b : batches) n += b.samples.size();
    return n;
}

Features sample_parameters(std::mt19937_64& g, const ParameterRanges& ranges) {
    ranges.validate();
    Features f;
    f[0] = rng::truncated_normal(g, ranges.c0.lo, ranges.c0.hi);
    f[1] = rng::truncated_normal(g, ranges.half_thickness.lo, ranges.half_thickness.hi,
                                 /*lo_open=*/true);
    f[2] = rng::truncated_normal(g, -f[1], f[1]);
    f[3] = rng::truncated_normal(g, ranges.t_years.lo, ranges.t_years.hi) * kSecondsPerYear;
    f[4] = sample_log_decades(g, ranges.k);
    f[5] = sample_log_decades(g, ranges.de);
    return f;
}

Sample label_sample(const Features& features, LabelSource source) {
    ProblemSpec spec{features[5], features[4], features[0], features[1]};
    spec.validate();
    if (std::abs(features[2]) > spec.half_thickness)
        throw OutOfDomain("label_sample: |x| > half_thickness");
    Sample s{features, 0.0, source};
    std::vector<Sample> one{s};
    label_batch(one, source);
    return one.front();
}

SplitIndices make_splits(int n_batches) {
    if (n_batches < 1) throw std::invalid_argument("make_splits: n_batches must be >= 1");
    int held = (n_batches >= 3) ? std::max(1, n_batches * 5 / 100) : 0;
    SplitIndices s;
    for (int i = 0; i < n_batches - 2 * held; ++i) s.train.push_back(i);
    for (int i = n_batches - 2 * held; i < n_batches - held; ++i) s.validation.push_back(i);
    for (int i = n_batches - held; i < n_batches; ++i) s.test.push_back(i);
    return s;
}

Dataset generate(std::uint64_t seed, int n_batches, int batch_size, const ParameterRanges& ranges,
                 SplitSources sources, int jobs) {
    if (n_batches < 1) throw std::invalid_argument("generate: n_batches must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("generate: batch_size must be >= 1");
    ranges.validate();

    Dataset ds;
    ds.seed = seed;
    ds.batch_size = batch_size;
    ds.ranges = ranges;
    ds.sources = sources;
    ds.splits = make_splits(n_batches);
    ds.batches.resize(n_batches);

    std::vector<LabelSource> role(n_batches, sources.train);
    for (int b : ds.splits.validation) role[b] = sources.validation;
    for (int b : ds.splits.test) role[b] = sources.test;

    auto work = [&](int b) {
        ds.batches[b] = make_batch(rng::derive_seed(seed, b), batch_size, ranges, role[b]);
    };
    if (jobs <= 1) {
        for (int b = 0; b < n_batches; ++b) work(b);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int b = next.fetch_add(1); b < n_batches; b = next.fetch_add(1)) work(b);
        };
        std::vector<std::thread> pool;
        for (int j = 0; j < std::min(jobs, n_batches); ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return ds;
}

NormStats compute_norm_stats(const Dataset& ds, NormMode mode) {
    std::vector<Sample> train = ds.gather(Split::Train);
    if (train.empty()) throw EmptyInput("compute_norm_stats: empty training split");
    const double m = static_cast<double>(train.size());
    NormStats st;
    st.mode = mode;
    for (int f = 0; f < 6; ++f) {
        double sum = 0.0, sum_sq = 0.0;
        for (const Sample& s : train) {
            sum += s.features[f];
            sum_sq += s.features[f] * s.features[f];
        }
        const double mu = sum / m;
        double var = 0.0;
        for (const Sample& s : train) var += (s.features[f] - mu) * (s.features[f] - mu);
        var /= m;
        if (var == 0.0)
            throw DegenerateFeature("compute_norm_stats: feature " + std::to_string(f) +
                                    " is constant");
        st.mu[f] = mu;
        st.sigma_sq[f] = (mode == NormMode::PaperExact) ? sum_sq / m : var;
    }
    return st;
}

Features normalize(const Features& raw, const NormStats& stats) {
    Features out;
    for (int f = 0; f < 6; ++f) {
        double denom = (stats.mode == NormMode::PaperExact) ? stats.sigma_sq[f]
                                                            : std::sqrt(stats.sigma_sq[f]);
        out[f] = (raw[f] - stats.mu[f]) / denom;
    }
    return out;
}

Features denormalize(const Features& normalized, const NormStats& stats) {
    Features out;
    for (int f = 0; f < 6; ++f) {
        double denom = (stats.mode == NormMode::PaperExact) ? stats.sigma_sq[f]
                                                            : std::sqrt(stats.sigma_sq[f]);
        out[f] = normalized[f] * denom + stats.mu[f];
    }
    return out;
}

void save(const Dataset& ds, const std::filesystem::path& csv_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw MalformedFile("cannot open " + csv_path.string() + " for writing");
    csv << kCsvHeader << '\n';
    for (const Batch& b : ds.batches)
        for (const Sample& s : b.samples) {
            for (double v : s.features) csv << io::format_g17(v) << ',';
            csv << io::format_g17(s.label) << ',' << source_token(s.source) << '\n';
        }
    if (!csv) throw MalformedFile("write failure on " + csv_path.string());

    json meta;
    meta["format_version"] = kMetaFormatVersion;
    meta["seed"] = ds.seed;
    meta["batch_size"] = ds.batch_size;
    meta["n_batches"] = ds.batches.size();
    meta["ranges"] = {{"c0", interval_json(ds.ranges.c0)},
                      {"half_thickness", interval_json(ds.ranges.half_thickness)},
                      {"t_years", interval_json(ds.ranges.t_years)},
                      {"k", interval_json(ds.ranges.k)},
                      {"de", interval_json(ds.ranges.de)}};
    meta["sources"] = {{"train", source_token(ds.sources.train)},
                       {"validation", source_token(ds.sources.validation)},
                       {"test", source_token(ds.sources.test)}};
    meta["splits"] = {{"train", ds.splits.train},
                      {"validation", ds.splits.validation},
                      {"test", ds.splits.test}};
    if (ds.norm) {
        meta["norm"] = {{"mode", ds.norm->mode == NormMode::PaperExact ? "paper_exact" : "standard"},
                        {"mu", ds.norm->mu},
                        {"sigma_sq", ds.norm->sigma_sq}};
    } else {
        meta["norm"] = nullptr;
    }
    std::filesystem::path meta_path = csv_path;
    meta_path.replace_extension(".meta.json");
    std::ofstream mf(meta_path);
    if (!mf) throw MalformedFile("cannot open " + meta_path.string() + " for writing");
    mf << meta.dump(2) << '\n';
}

Dataset load(const std::filesystem::path& csv_path) {
    std::ifstream csv(csv_path);
    if (!csv) throw MalformedFile("cannot open " + csv_path.string());

    std::string line;
    long line_no = 1;
    if (!std::getline(csv, line)) throw MalformedFile("empty file", line_no);
    if (line == std::string(kCsvHeader) + "\r") line.pop_back();
    if (line != kCsvHeader)
        throw MalformedFile("bad header, expected '" + std::string(kCsvHeader) + "'", line_no);

    std::vector<Sample> rows;
    while (std::getline(csv, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = io::split_csv(line);
        if (fields.size() != 8) throw MalformedFile("expected 8 fields", line_no);
        Sample s;
        for (int f = 0; f < 6; ++f)
            if (!io::parse_double(fields[f], s.features[f]))
                throw MalformedFile("bad number '" + fields[f] + "'", line_no);
        if (!io::parse_double(fields[6], s.label))
            throw MalformedFile("bad number '" + fields[6] + "'", line_no);
        s.source = parse_source(fields[7], line_no);
        if (std::abs(s.features[2]) > s.features[1])
            throw MalformedFile("|x| exceeds half_thickness", line_no);
        rows.push_back(s);
    }

    Dataset ds;
    std::filesystem::path meta_path = csv_path;
    meta_path.replace_extension(".meta.json");
    std::ifstream mf(meta_path);
    const bool has_meta = mf.good();
    if (has_meta) {
        json meta;
        try {
            meta = json::parse(mf);
        } catch (const json::exception& e) {
            throw MalformedFile("bad meta sidecar: " + std::string(e.what()));
        }
        try {
            if (meta.at("format_version").get<int>() != kMetaFormatVersion)
                throw VersionMismatch("meta sidecar format_version " +
                                      meta.at("format_version").dump() + ", expected " +
                                      std::to_string(kMetaFormatVersion));
            ds.seed = meta.at("seed").get<std::uint64_t>();
            ds.batch_size = meta.at("batch_size").get<int>();
            const json& r = meta.at("ranges");
            ds.ranges.c0 = interval_from_json(r.at("c0"));
            ds.ranges.half_thickness = interval_from_json(r.at("half_thickness"));
            ds.ranges.t_years = interval_from_json(r.at("t_years"));
            ds.ranges.k = interval_from_json(r.at("k"));
            ds.ranges.de = interval_from_json(r.at("de"));
            const json& so = meta.at("sources");
            ds.sources.train = parse_source(so.at("train").get<std::string>(), 0);
            ds.sources.validation = parse_source(so.at("validation").get<std::string>(), 0);
            ds.sources.test = parse_source(so.at("test").get<std::string>(), 0);
            const json& sp = meta.at("splits");
            ds.splits.train = sp.at("train").get<std::vector<int>>();
            ds.splits.validation = sp.at("validation").get<std::vector<int>>();
            ds.splits.test = sp.at("test").get<std::vector<int>>();
            if (!meta.at("norm").is_null()) {
                NormStats st;
                st.mode = meta["norm"].at("mode").get<std::string>() == "paper_exact"
                              ? NormMode::PaperExact
                              : NormMode::Standard;
                auto mu = meta["norm"].at("mu").get<std::vector<double>>();
                auto sq = meta["norm"].at("sigma_sq").get<std::vector<double>>();
                if (mu.size() != 6 || sq.size() != 6)
                    throw MalformedFile("norm stats must have 6 features");
                std::copy(mu.begin(), mu.end(), st.mu.begin());
                std::copy(sq.begin(), sq.end(), st.sigma_sq.begin());
                ds.norm = st;
            }
            std::size_t expected =
                meta.at("n_batches").get<std::size_t>() * static_cast<std::size_t>(ds.batch_size);
            if (rows.size() != expected)
                throw MalformedFile("row count " + std::to_string(rows.size()) +
                                        " does not match meta (" + std::to_string(expected) + ")",
                                    line_no);
        } catch (const json::exception& e) {
            throw MalformedFile("bad meta sidecar: " + std::string(e.what()));
        }
    } else {
        ds.batch_size = 3000;
        if (rows.empty() || rows.size() % 3000 != 0)
            throw MalformedFile("no meta sidecar and row count " + std::to_string(rows.size()) +
                                    " is not a multiple of 3000",
                                line_no);
        ds.splits = make_splits(static_cast<int>(rows.size() / 3000));
    }

    for (std::size_t start = 0; start < rows.size(); start += ds.batch_size) {
        Batch b;
        b.samples.assign(rows.begin() + start, rows.begin() + start + ds.batch_size);
        ds.batches.push_back(std::move(b));
    }
    if (has_meta) {
        // splits must address existing batches
        for (const auto* vec : {&ds.splits.train, &ds.splits.validation, &ds.splits.test})
            for (int b : *vec)
                if (b < 0 || b >= static_cast<int>(ds.batches.size()))
                    throw MalformedFile("split index " + std::to_string(b) + " out of range");
    }
    return ds;
}

}  // namespace rdlab::data
