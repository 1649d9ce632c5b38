#include <doctest.h>

#include <rdlab/analytic.hpp>
#include <rdlab/dataset.hpp>
#include <rdlab/errors.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace rdlab;
using namespace rdlab::data;

namespace {

namespace fs = std::filesystem;

const ParameterRanges kDeskRanges = [] {
    ParameterRanges r;
    r.c0 = {50.0, 100.0};
    r.k = {1e-8, 1e-6};
    r.de = {1e-10, 1e-8};
    return r;
}();

fs::path temp_dir() {
    fs::path p = fs::temp_directory_path() / "rdlab_dataset_test";
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
}

/// A tiny hand-built dataset: three samples in one training batch, feature f
/// holding base[f] * {1, 2, 3}.
Dataset tiny_dataset(const Features& base) {
    Dataset ds;
    Batch b;
    for (double scale : {1.0, 2.0, 3.0}) {
        Sample s;
        for (int f = 0; f < 6; ++f) s.features[f] = base[f] * scale;
        s.label = 0.0;
        b.samples.push_back(s);
    }
    ds.batches.push_back(b);
    ds.splits.train = {0};
    ds.batch_size = 3;
    return ds;
}

}  // namespace

TEST_CASE("sample_parameters: determinism and bounds") {
    ParameterRanges ranges;
    std::mt19937_64 g1(12345), g2(12345);
    for (int i = 0; i < 100; ++i) {
        Features a = sample_parameters(g1, ranges);
        Features b = sample_parameters(g2, ranges);
        CHECK(a == b);
    }

    std::mt19937_64 g(7);
    for (int i = 0; i < 100000; ++i) {
        Features f = sample_parameters(g, ranges);
        CHECK(f[0] >= 0.0);
        CHECK(f[0] <= 200.0);
        CHECK(f[1] > 0.0);
        CHECK(f[1] <= 0.05);
        CHECK(std::abs(f[2]) <= f[1]);
        CHECK(f[3] >= 0.0);
        CHECK(f[3] <= 7.0 * kSecondsPerYear);
        CHECK(f[4] >= 1e-10);
        CHECK(f[4] <= 1e-1);
        CHECK(f[5] >= 1e-13);
        CHECK(f[5] <= 1e-1);
    }
}

TEST_CASE("sample_parameters: de decade histogram spans the full range") {
    ParameterRanges ranges;
    std::mt19937_64 g(99);
    std::array<int, 12> decade_counts{};  // [1e-13,1e-12) ... [1e-2,1e-1)
    for (int i = 0; i < 100000; ++i) {
        Features f = sample_parameters(g, ranges);
        int d = static_cast<int>(std::floor(std::log10(f[5]))) + 13;
        REQUIRE(d >= 0);
        REQUIRE(d < 12);
        ++decade_counts[d];
    }
    for (int d = 0; d < 12; ++d) CHECK(decade_counts[d] > 0);
}

TEST_CASE("label_sample") {
    SUBCASE("t = 0 interior vanishes for both sources") {
        Features f{75.5, 0.05, 0.01, 0.0, 2.125e-7, 2.6e-9};
        CHECK(label_sample(f, LabelSource::FiniteDifference).label == 0.0);
        CHECK(label_sample(f, LabelSource::AnalyticSeries).label == 0.0);
    }
    SUBCASE("walls give c0") {
        Features f{75.5, 0.05, 0.05, kSecondsPerYear, 2.125e-7, 2.6e-9};
        CHECK(label_sample(f, LabelSource::AnalyticSeries).label == 75.5);
        CHECK(label_sample(f, LabelSource::FiniteDifference).label == 75.5);
    }
    SUBCASE("the two oracles agree at the baseline") {
        Features f{75.5, 0.05, 0.0, kSecondsPerYear, 2.125e-7, 2.6e-9};
        double fd_label = label_sample(f, LabelSource::FiniteDifference).label;
        double series_label = label_sample(f, LabelSource::AnalyticSeries).label;
        CHECK(std::abs(fd_label - series_label) < 0.005 * 75.5);
    }
    SUBCASE("label source is recorded") {
        Features f{60.0, 0.02, 0.0, 1e6, 1e-7, 1e-9};
        CHECK(label_sample(f, LabelSource::AnalyticSeries).source ==
              LabelSource::AnalyticSeries);
        CHECK(label_sample(f, LabelSource::FiniteDifference).source ==
              LabelSource::FiniteDifference);
    }
}

TEST_CASE("generate: splits, sources, determinism, parallelism") {
    Dataset ds = generate(421, 20, 10, kDeskRanges);
    CHECK(ds.splits.train.size() == 18);
    CHECK(ds.splits.validation.size() == 1);
    CHECK(ds.splits.test.size() == 1);
    CHECK(ds.total_samples() == 200);

    // split coverage and disjointness
    std::vector<int> seen(20, 0);
    for (const auto* split : {&ds.splits.train, &ds.splits.validation, &ds.splits.test})
        for (int b : *split) ++seen[b];
    for (int c : seen) CHECK(c == 1);

    for (int b : ds.splits.test)
        for (const Sample& s : ds.batches[b].samples)
            CHECK(s.source == LabelSource::AnalyticSeries);
    for (int b : ds.splits.train)
        for (const Sample& s : ds.batches[b].samples)
            CHECK(s.source == LabelSource::FiniteDifference);

    // labels within physical bounds
    for (const Batch& b : ds.batches)
        for (const Sample& s : b.samples) {
            CHECK(s.label >= 0.0);
            CHECK(s.label <= s.features[0] * (1.0 + 1e-6));
        }

    Dataset again = generate(421, 20, 10, kDeskRanges);
    Dataset parallel = generate(421, 20, 10, kDeskRanges, {}, 4);
    REQUIRE(again.batches.size() == ds.batches.size());
    for (std::size_t b = 0; b < ds.batches.size(); ++b)
        for (std::size_t i = 0; i < ds.batches[b].samples.size(); ++i) {
            CHECK(ds.batches[b].samples[i].features == again.batches[b].samples[i].features);
            CHECK(ds.batches[b].samples[i].label == again.batches[b].samples[i].label);
            CHECK(ds.batches[b].samples[i].features == parallel.batches[b].samples[i].features);
            CHECK(ds.batches[b].samples[i].label == parallel.batches[b].samples[i].label);
        }
}

TEST_CASE("norm stats worked examples") {
    SUBCASE("constant feature is degenerate") {
        Features base{1.0, 0.01, 0.001, 1e6, 1e-7, 1e-9};
        Dataset ds = tiny_dataset(base);
        for (Sample& s : ds.batches[0].samples) s.features[0] = 2.0;  // constant column
        CHECK_THROWS_AS(compute_norm_stats(ds, NormMode::Standard), DegenerateFeature);
        CHECK_THROWS_AS(compute_norm_stats(ds, NormMode::PaperExact), DegenerateFeature);
    }
    SUBCASE("values {1,2,3}: PaperExact divides by the raw second moment") {
        Dataset ds = tiny_dataset({1.0, 0.01, 0.001, 1e6, 1e-7, 1e-9});
        NormStats st = compute_norm_stats(ds, NormMode::PaperExact);
        CHECK(st.mu[0] == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(st.sigma_sq[0] == doctest::Approx(14.0 / 3.0).epsilon(1e-15));
        Features probe{2.0, 0.02, 0.002, 2e6, 2e-7, 2e-9};
        CHECK(normalize(probe, st)[0] == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("values {1,2,3}: Standard z-score") {
        Dataset ds = tiny_dataset({1.0, 0.01, 0.001, 1e6, 1e-7, 1e-9});
        NormStats st = compute_norm_stats(ds, NormMode::Standard);
        CHECK(st.sigma_sq[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
        Features probe{3.0, 0.03, 0.003, 3e6, 3e-7, 3e-9};
        CHECK(normalize(probe, st)[0] ==
              doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
    }
}

TEST_CASE("normalization round trip and centering") {
    Dataset ds = generate(5, 20, 10, kDeskRanges);
    for (NormMode mode : {NormMode::Standard, NormMode::PaperExact}) {
        NormStats st = compute_norm_stats(ds, mode);

        // mu maps to the zero vector
        Features mu_probe;
        std::copy(st.mu.begin(), st.mu.end(), mu_probe.begin());
        for (double v : normalize(mu_probe, st)) CHECK(std::abs(v) < 1e-14);

        // round trip to 1e-12 relative to the feature scale (the affine map
        // subtracts and re-adds mu, flooring absolute error at eps*|mu|)
        std::mt19937_64 g(3);
        ParameterRanges full;
        for (int i = 0; i < 10000; ++i) {
            Features f = sample_parameters(g, full);
            Features back = denormalize(normalize(f, st), st);
            for (int j = 0; j < 6; ++j) {
                double scale = std::max(std::abs(f[j]), std::sqrt(st.sigma_sq[j]));
                CHECK(std::abs(back[j] - f[j]) / scale < 1e-12);
            }
        }

        // normalized training means vanish
        std::array<double, 6> mean{};
        std::vector<Sample> train = ds.gather(Split::Train);
        for (const Sample& s : train) {
            Features z = normalize(s.features, st);
            for (int j = 0; j < 6; ++j) mean[j] += z[j];
        }
        for (int j = 0; j < 6; ++j) {
            double scale = (mode == NormMode::Standard)
                               ? 1.0
                               : std::sqrt(st.sigma_sq[j]) / st.sigma_sq[j];
            CHECK(std::abs(mean[j] / train.size()) < 1e-10 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("save and load round trip") {
    fs::path dir = temp_dir();
    Dataset ds = generate(99, 4, 5, kDeskRanges);
    ds.norm = compute_norm_stats(ds, NormMode::Standard);
    fs::path csv = dir / "roundtrip.csv";
    save(ds, csv);
    Dataset back = load(csv);

    CHECK(back.seed == ds.seed);
    CHECK(back.batch_size == ds.batch_size);
    CHECK(back.splits.train == ds.splits.train);
    CHECK(back.splits.validation == ds.splits.validation);
    CHECK(back.splits.test == ds.splits.test);
    REQUIRE(back.norm.has_value());
    CHECK(back.norm->mu == ds.norm->mu);
    CHECK(back.norm->sigma_sq == ds.norm->sigma_sq);
    REQUIRE(back.batches.size() == ds.batches.size());
    for (std::size_t b = 0; b < ds.batches.size(); ++b)
        for (std::size_t i = 0; i < ds.batches[b].samples.size(); ++i) {
            CHECK(back.batches[b].samples[i].features == ds.batches[b].samples[i].features);
            CHECK(back.batches[b].samples[i].label == ds.batches[b].samples[i].label);
            CHECK(back.batches[b].samples[i].source == ds.batches[b].samples[i].source);
        }

    SUBCASE("byte-identical persistence for the same seed") {
        Dataset twin = generate(99, 4, 5, kDeskRanges);
        twin.norm = compute_norm_stats(twin, NormMode::Standard);
        fs::path csv2 = dir / "roundtrip2.csv";
        save(twin, csv2);
        CHECK(slurp(csv) == slurp(csv2));
        fs::path meta1 = csv, meta2 = csv2;
        meta1.replace_extension(".meta.json");
        meta2.replace_extension(".meta.json");
        CHECK(slurp(meta1) == slurp(meta2));
    }
}

TEST_CASE("load failure modes") {
    fs::path dir = temp_dir();
    SUBCASE("truncated file") {
        Dataset ds = generate(13, 3, 4, kDeskRanges);
        fs::path csv = dir / "trunc.csv";
        save(ds, csv);
        std::string text = slurp(csv);
        std::ofstream(csv, std::ios::binary) << text.substr(0, text.size() / 2);
        CHECK_THROWS_AS(load(csv), MalformedFile);
    }
    SUBCASE("bad number carries the line position") {
        fs::path csv = dir / "bad.csv";
        std::ofstream(csv) << "c0,L,x,t,k,de,c,source\n"
                           << "75.5,0.05,0,1,1e-7,1e-9,0,fd\n"
                           << "75.5,0.05,zero,1,1e-7,1e-9,0,fd\n";
        try {
            load(csv);
            FAIL("expected MalformedFile");
        } catch (const MalformedFile& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("missing sidecar: rows group into batches of 3000") {
        fs::path csv = dir / "nometa.csv";
        std::ofstream os(csv);
        os << "c0,L,x,t,k,de,c,source\n";
        for (int i = 0; i < 3000; ++i) os << "75.5,0.05,0.01,1e6,1e-7,1e-9,0.5,series\n";
        os.close();
        Dataset ds = load(csv);
        CHECK(ds.batches.size() == 1);
        CHECK(ds.batches[0].samples.size() == 3000);
    }
    SUBCASE("missing sidecar with a partial batch is rejected") {
        fs::path csv = dir / "partial.csv";
        std::ofstream os(csv);
        os << "c0,L,x,t,k,de,c,source\n";
        for (int i = 0; i < 7; ++i) os << "75.5,0.05,0.01,1e6,1e-7,1e-9,0.5,fd\n";
        os.close();
        CHECK_THROWS_AS(load(csv), MalformedFile);
    }
}

TEST_CASE("make_splits properties") {
    for (int n : {20, 21, 40, 100, 1000}) {
        SplitIndices s = make_splits(n);
        CHECK(static_cast<int>(s.train.size() + s.validation.size() + s.test.size()) == n);
        CHECK(s.validation.size() == s.test.size());
        CHECK(s.validation.size() == static_cast<std::size_t>(std::max(1, n * 5 / 100)));
        std::vector<int> seen(n, 0);
        for (const auto* v : {&s.train, &s.validation, &s.test})
            for (int b : *v) ++seen[b];
        for (int c : seen) CHECK(c == 1);
    }
}
