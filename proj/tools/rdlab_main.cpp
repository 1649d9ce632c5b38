// rdlab: command-line front end for the reaction-diffusion solvers, the
// dataset pipeline, surrogate training, and the evaluation sweeps.
//
// Exit codes: 0 success, 2 usage, 3 numerical failure, 4 I/O failure,
// 5 training divergence.

#include <rdlab/analytic.hpp>
#include <rdlab/csvio.hpp>
#include <rdlab/dataset.hpp>
#include <rdlab/errors.hpp>
#include <rdlab/evaluation.hpp>
#include <rdlab/fd.hpp>
#include <rdlab/mlp.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rdlab;

namespace {

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string file_hash_hex(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) return "";
    std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

void write_text(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream os(p);
    if (!os) throw MalformedFile("cannot open " + p.string() + " for writing");
    os << text;
    if (!os) throw MalformedFile("write failure on " + p.string());
}

/// Resolved-config sidecar: enough to re-run the command bit-identically.
void write_run_sidecar(const fs::path& out_path, const std::string& command, const json& resolved) {
    json doc{{"command", command}, {"resolved", resolved}};
    fs::path p = out_path;
    p += ".run.json";
    write_text(p, doc.dump(2) + "\n");
}

fs::path dataset_csv_path(const std::string& data_arg) {
    fs::path p(data_arg);
    if (fs::is_directory(p)) return p / "data.csv";
    return p;
}

data::LabelSource parse_source_flag(const std::string& s) {
    if (s == "fd") return data::LabelSource::FiniteDifference;
    if (s == "series") return data::LabelSource::AnalyticSeries;
    throw std::invalid_argument("label source must be 'fd' or 'series'");
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct SolveArgs {
    std::string method = "series";
    double de = 2.6e-9, k = 2.125e-7, c0 = 75.5, half_thickness = 0.05;
    double x = 0.0, t_years = 1.0;
    int max_terms = 500;
    double tail_tol = -1.0;  // <0: default 1e-12*c0
    int quad_steps = 256;
    int nx = 201;
    long nt = 0;  // 0: dt <= horizon/400 default
    bool grid_export = false;
    std::string out;
};

void run_solve(const SolveArgs& a) {
    ProblemSpec spec{a.de, a.k, a.c0, a.half_thickness};
    spec.validate();
    const double t = a.t_years * kSecondsPerYear;
    SeriesOptions opts{a.max_terms,
                       a.tail_tol >= 0.0 ? std::optional<double>(a.tail_tol) : std::nullopt};
    SpaceTimePoint pt{a.x, t};

    if (a.grid_export) {
        if (a.out.empty()) throw std::invalid_argument("--grid requires --out");
        if (a.method != "fd") throw std::invalid_argument("--grid is only meaningful with --method fd");
    }

    double value = 0.0;
    if (a.method == "series") {
        value = analytic::reaction_diffusion_series(spec, pt, opts);
    } else if (a.method == "pure-diffusion") {
        value = analytic::pure_diffusion_series(spec, pt, opts);
    } else if (a.method == "danckwerts") {
        value = analytic::danckwerts_transform(spec, pt, a.quad_steps, opts);
    } else if (a.method == "steady") {
        value = analytic::steady_state_profile(spec, a.x);
    } else if (a.method == "pure-reaction") {
        value = analytic::pure_reaction(a.c0, a.k, t);
    } else if (a.method == "fd") {
        if (!(t > 0.0)) throw std::invalid_argument("--method fd needs --t-years > 0");
        fd::Grid grid = (a.nt > 0) ? fd::Grid::make(a.nx, a.nt, t, spec.half_thickness)
                                   : fd::Grid::make(a.nx, 400, t, spec.half_thickness);
        fd::SolutionField field = fd::solve(spec, grid);
        if (a.grid_export) {
            std::ofstream os(a.out);
            if (!os) throw MalformedFile("cannot open " + a.out + " for writing");
            field.write_csv(os);
            json resolved{{"method", a.method}, {"de", a.de},    {"k", a.k},
                          {"c0", a.c0},         {"half_thickness", a.half_thickness},
                          {"t_years", a.t_years}, {"nx", a.nx},  {"nt", grid.nt}};
            write_run_sidecar(a.out, "solve", resolved);
            std::cout << "wrote " << a.out << "\n";
            return;
        }
        value = field.probe(a.x, t);
    } else {
        throw std::invalid_argument("unknown --method '" + a.method + "'");
    }
    std::cout << io::format_g17(value) << "\n";
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenArgs {
    int batches = 1000;
    int batch_size = 3000;
    std::uint64_t seed = 1;
    std::string out = "dataset";
    std::vector<double> c0_range{0.0, 200.0};
    std::vector<double> l_range{0.0, 0.05};
    std::vector<double> t_years_range{0.0, 7.0};
    std::vector<double> k_range{1e-10, 1e-1};
    std::vector<double> de_range{1e-13, 1e-1};
    std::string train_source = "fd", validation_source = "fd", test_source = "series";
    std::string norm = "standard";
    int jobs = 1;
};

data::ParameterRanges ranges_from(const GenArgs& a) {
    auto iv = [](const std::vector<double>& v, const char* name) {
        if (v.size() != 2) throw std::invalid_argument(std::string(name) + " needs lo,hi");
        return data::Interval{v[0], v[1]};
    };
    data::ParameterRanges r;
    r.c0 = iv(a.c0_range, "--c0-range");
    r.half_thickness = iv(a.l_range, "--half-thickness-range");
    r.t_years = iv(a.t_years_range, "--t-years-range");
    r.k = iv(a.k_range, "--k-range");
    r.de = iv(a.de_range, "--de-range");
    return r;
}

json gen_resolved(const GenArgs& a) {
    return json{{"batches", a.batches},
                {"batch_size", a.batch_size},
                {"seed", a.seed},
                {"out", a.out},
                {"c0_range", a.c0_range},
                {"half_thickness_range", a.l_range},
                {"t_years_range", a.t_years_range},
                {"k_range", a.k_range},
                {"de_range", a.de_range},
                {"train_source", a.train_source},
                {"validation_source", a.validation_source},
                {"test_source", a.test_source},
                {"norm", a.norm},
                {"jobs", a.jobs}};
}

void run_gen(const GenArgs& a) {
    if (a.batches < 1) throw std::invalid_argument("--batches must be >= 1");
    if (a.batch_size < 1) throw std::invalid_argument("--batch-size must be >= 1");
    data::SplitSources sources{parse_source_flag(a.train_source),
                               parse_source_flag(a.validation_source),
                               parse_source_flag(a.test_source)};
    data::Dataset ds =
        data::generate(a.seed, a.batches, a.batch_size, ranges_from(a), sources, a.jobs);
    if (a.norm == "standard")
        ds.norm = data::compute_norm_stats(ds, data::NormMode::Standard);
    else if (a.norm == "paper-exact")
        ds.norm = data::compute_norm_stats(ds, data::NormMode::PaperExact);
    else if (a.norm != "none")
        throw std::invalid_argument("--norm must be standard, paper-exact, or none");

    fs::create_directories(a.out);
    fs::path csv = fs::path(a.out) / "data.csv";
    data::save(ds, csv);
    write_run_sidecar(csv, "gen", gen_resolved(a));
    std::cout << "wrote " << csv.string() << " (" << ds.total_samples() << " samples, "
              << ds.splits.train.size() << "/" << ds.splits.validation.size() << "/"
              << ds.splits.test.size() << " train/val/test batches)\n";
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string data;
    std::vector<int> hidden{64, 64, 32};
    double lambda = 1e-4;
    int epochs = 80;
    std::uint64_t seed = 1;
    int batch_size = 128;
    double alpha = 1e-3;
    bool paper_init = false;
    std::string out = "model.json";
    std::string history;
};

mlp::NetworkConfig config_from(const TrainArgs& a) {
    mlp::NetworkConfig cfg;
    cfg.layer_sizes.clear();
    cfg.layer_sizes.push_back(6);
    for (int h : a.hidden) cfg.layer_sizes.push_back(h);
    cfg.layer_sizes.push_back(1);
    cfg.lambda = a.lambda;
    cfg.epochs = a.epochs;
    cfg.seed = a.seed;
    cfg.batch_size = a.batch_size;
    cfg.adam.alpha = a.alpha;
    cfg.paper_unscaled_init = a.paper_init;
    return cfg;
}

json train_resolved(const TrainArgs& a) {
    return json{{"data", a.data},       {"hidden", a.hidden},
                {"lambda", a.lambda},   {"epochs", a.epochs},
                {"seed", a.seed},       {"batch_size", a.batch_size},
                {"alpha", a.alpha},     {"paper_init", a.paper_init},
                {"out", a.out},         {"history", a.history}};
}

void run_train(const TrainArgs& a) {
    data::Dataset ds = data::load(dataset_csv_path(a.data));
    auto [ckpt, report] = mlp::train(ds, config_from(a));
    mlp::save_checkpoint(ckpt, a.out);
    json resolved = train_resolved(a);
    resolved["initial_validation_loss"] = report.initial_validation_loss;
    resolved["best_epoch"] = report.best_epoch;
    write_run_sidecar(a.out, "train", resolved);
    if (!a.history.empty()) {
        std::ostringstream os;
        os << "epoch,train_loss,validation_loss\n";
        for (std::size_t e = 0; e < report.train_loss.size(); ++e)
            os << e << ',' << io::format_g17(report.train_loss[e]) << ','
               << io::format_g17(report.validation_loss[e]) << '\n';
        write_text(a.history, os.str());
    }
    double best = report.best_epoch >= 0 ? report.validation_loss[report.best_epoch]
                                         : report.initial_validation_loss;
    std::cout << "wrote " << a.out << " (best epoch "
              << (report.best_epoch >= 0 ? std::to_string(report.best_epoch) : "initial")
              << ", validation loss " << io::format_g17(best) << ", "
              << io::format_g17(report.wall_seconds) << " s)\n";
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string model;
    std::string data;
    std::vector<double> thresholds{0.5, 1.0, 2.0};
    std::string split = "all";
    std::string out;
};

eval::EvalReport oracle_evaluate(const std::vector<data::Sample>& samples,
                                 const std::vector<double>& thetas, const std::string& name) {
    std::vector<double> pred(samples.size()), target(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const data::Features& f = samples[i].features;
        pred[i] = data::label_sample(f, data::LabelSource::AnalyticSeries).label;
        target[i] = samples[i].label;
    }
    eval::EvalReport r;
    r.mse = eval::mse(pred, target);
    for (double th : thetas) r.threshold_accuracy[th] = eval::threshold_accuracy(pred, target, th);
    r.n = samples.size();
    r.split = name;
    return r;
}

void run_eval(const EvalArgs& a) {
    data::Dataset ds = data::load(dataset_csv_path(a.data));
    std::vector<std::pair<std::string, data::Split>> wanted;
    if (a.split == "all") {
        wanted = {{"train", data::Split::Train},
                  {"validation", data::Split::Validation},
                  {"test", data::Split::Test}};
    } else if (a.split == "train") {
        wanted = {{"train", data::Split::Train}};
    } else if (a.split == "validation") {
        wanted = {{"validation", data::Split::Validation}};
    } else if (a.split == "test") {
        wanted = {{"test", data::Split::Test}};
    } else {
        throw std::invalid_argument("--split must be all, train, validation, or test");
    }

    const bool oracle = (a.model == "oracle:series");
    std::optional<mlp::Checkpoint> ckpt;
    if (!oracle) ckpt = mlp::load_checkpoint(a.model);

    std::vector<eval::EvalReport> reports;
    for (auto& [name, split] : wanted) {
        std::vector<data::Sample> samples = ds.gather(split);
        if (samples.empty()) continue;
        reports.push_back(oracle ? oracle_evaluate(samples, a.thresholds, name)
                                 : eval::evaluate(*ckpt, samples, a.thresholds, name));
    }
    std::string csv = eval::eval_report_csv(reports);
    std::cout << csv;
    if (!a.out.empty()) {
        write_text(a.out, csv);
        json resolved{{"model", a.model},
                      {"data", a.data},
                      {"thresholds", a.thresholds},
                      {"split", a.split},
                      {"model_hash", oracle ? "oracle" : file_hash_hex(a.model)}};
        write_run_sidecar(a.out, "eval", resolved);
    }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepArgs {
    std::string kind;
    std::string model;
    std::string out = "sweep";
    std::vector<double> values;
    std::vector<int> counts{10, 30, 100};
    std::uint64_t seed = 1;
    int batch_size = 1000;
    GenArgs gen;    // ranges reused for batch sweeps
    TrainArgs net;  // network settings reused for batch sweeps
    double c0 = 75.5;
    double half_thickness = 0.05;
    double fixed_k = 2.125e-7;
    double fixed_de = 2.6e-9;
    int jobs = 1;
};

void run_sweep(const SweepArgs& a) {
    fs::create_directories(a.out);
    json resolved{{"kind", a.kind}, {"out", a.out}, {"seed", a.seed}};
    if (a.kind == "batch") {
        mlp::NetworkConfig cfg = config_from(a.net);
        auto rows = eval::batch_sweep(a.seed, a.counts, a.batch_size, ranges_from(a.gen), cfg,
                                      data::SplitSources{}, a.jobs);
        fs::path csv = fs::path(a.out) / "batch_sweep.csv";
        write_text(csv, eval::batch_sweep_csv(rows));
        resolved["counts"] = a.counts;
        resolved["batch_size"] = a.batch_size;
        resolved["ranges"] = gen_resolved(a.gen);
        resolved["network"] = train_resolved(a.net);
        write_run_sidecar(csv, "sweep", resolved);
        std::cout << eval::batch_sweep_csv(rows);
        return;
    }

    if (a.model.empty()) throw std::invalid_argument("--kind " + a.kind + " requires --model");
    mlp::Checkpoint ckpt = mlp::load_checkpoint(a.model);
    resolved["model"] = a.model;
    resolved["model_hash"] = file_hash_hex(a.model);

    if (a.kind == "k" || a.kind == "de") {
        std::vector<double> values = a.values;
        if (values.empty())
            values = (a.kind == "k")
                         ? std::vector<double>{2.125e-2, 2.125e-5, 2.125e-7, 2.125e-10, 2.125e-13}
                         : std::vector<double>{2.6e-5, 2.6e-7, 2.6e-10, 2.6e-12, 2.6e-15};
        ProblemSpec base{a.fixed_de, a.fixed_k, a.c0, a.half_thickness};
        std::vector<double> thetas{2.0, 1.0, 0.5};
        auto rows = eval::coefficient_sweep(
            base, a.kind == "k" ? eval::SweepField::K : eval::SweepField::De, values, ckpt, thetas);
        fs::path csv = fs::path(a.out) / (a.kind + "_sweep.csv");
        std::string text = eval::coeff_sweep_csv(rows, a.kind, thetas, /*include_mse=*/false);
        write_text(csv, text);
        resolved["values"] = values;
        resolved["c0"] = a.c0;
        resolved["half_thickness"] = a.half_thickness;
        resolved[a.kind == "k" ? "de" : "k"] = (a.kind == "k") ? a.fixed_de : a.fixed_k;
        write_run_sidecar(csv, "sweep", resolved);
        std::cout << text;
        return;
    }

    if (a.kind == "damkohler") {
        std::vector<double> values = a.values;
        if (values.empty()) values = {2e-14, 2e-13, 2e-12, 2e-11, 2e-10};
        std::vector<double> thetas{0.5, 1.0, 2.0};
        auto rows = eval::damkohler_sweep(values, ckpt, thetas,
                                          ProblemSpec{2e-10, 2e-4, a.c0, a.half_thickness});
        fs::path csv = fs::path(a.out) / "damkohler_sweep.csv";
        std::string text = eval::coeff_sweep_csv(rows, "de", thetas, /*include_mse=*/true);
        write_text(csv, text);
        resolved["values"] = values;
        resolved["c0"] = a.c0;
        resolved["half_thickness"] = a.half_thickness;
        resolved["k"] = 2e-4;
        write_run_sidecar(csv, "sweep", resolved);
        std::cout << text;
        return;
    }
    throw std::invalid_argument("--kind must be batch, k, de, or damkohler");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rdlab: reaction-diffusion solvers, dataset pipeline, neural surrogate,\n"
                 "and evaluation sweeps. Times are given in years at this interface\n"
                 "(1 year = 3.1536e7 s) and converted to seconds internally."};
    app.require_subcommand(1);
    app.set_config("--config")->description(
        "key=value config file, given before the subcommand; keys live under a\n"
        "[subcommand] section and command-line flags override them");

    SolveArgs so;
    CLI::App* solve = app.add_subcommand("solve", "evaluate one solver at a point or export a field");
    solve->add_option("--method", so.method,
                      "series|fd|danckwerts|steady|pure-diffusion|pure-reaction")
        ->capture_default_str();
    solve->add_option("--de", so.de, "diffusion coefficient, m^2/s")->capture_default_str();
    solve->add_option("--k", so.k, "reaction rate, 1/s")->capture_default_str();
    solve->add_option("--c0", so.c0, "boundary concentration, mol/m^3")->capture_default_str();
    solve->add_option("--half-thickness", so.half_thickness, "slab half-width L, m")
        ->capture_default_str();
    solve->add_option("--x", so.x, "position, m")->capture_default_str();
    solve->add_option("--t-years", so.t_years, "time, years")->capture_default_str();
    solve->add_option("--max-terms", so.max_terms)->capture_default_str();
    solve->add_option("--tail-tol", so.tail_tol, "absolute series tolerance, mol/m^3 (default 1e-12*c0)");
    solve->add_option("--quad-steps", so.quad_steps)->capture_default_str();
    solve->add_option("--nx", so.nx)->capture_default_str();
    solve->add_option("--nt", so.nt, "time steps (default: dt <= horizon/400)");
    solve->add_flag("--grid", so.grid_export, "write the full fd field as CSV to --out");
    solve->add_option("--out", so.out);
    solve->callback([&] { run_solve(so); });

    GenArgs ge;
    CLI::App* gen = app.add_subcommand("gen", "generate a labeled dataset");
    gen->add_option("--batches", ge.batches)->capture_default_str();
    gen->add_option("--batch-size", ge.batch_size)->capture_default_str();
    gen->add_option("--seed", ge.seed)->capture_default_str();
    gen->add_option("--out", ge.out, "output directory")->capture_default_str();
    gen->add_option("--c0-range", ge.c0_range, "lo,hi mol/m^3")->delimiter(',');
    gen->add_option("--half-thickness-range", ge.l_range, "lo,hi m")->delimiter(',');
    gen->add_option("--t-years-range", ge.t_years_range, "lo,hi years")->delimiter(',');
    gen->add_option("--k-range", ge.k_range, "lo,hi 1/s (decade-aligned)")->delimiter(',');
    gen->add_option("--de-range", ge.de_range, "lo,hi m^2/s (decade-aligned)")->delimiter(',');
    gen->add_option("--train-source", ge.train_source, "fd|series")->capture_default_str();
    gen->add_option("--validation-source", ge.validation_source, "fd|series")->capture_default_str();
    gen->add_option("--test-source", ge.test_source, "fd|series")->capture_default_str();
    gen->add_option("--norm", ge.norm, "standard|paper-exact|none")->capture_default_str();
    gen->add_option("--jobs", ge.jobs, "parallel batch generation (results identical)")
        ->capture_default_str();
    gen->callback([&] { run_gen(ge); });

    TrainArgs tr;
    CLI::App* train = app.add_subcommand("train", "train the surrogate on a dataset");
    train->add_option("--data", tr.data, "dataset directory or CSV path")->required();
    train->add_option("--hidden", tr.hidden, "hidden layer sizes")->delimiter(',');
    train->add_option("--lambda", tr.lambda, "L2 coefficient")->capture_default_str();
    train->add_option("--epochs", tr.epochs)->capture_default_str();
    train->add_option("--seed", tr.seed)->capture_default_str();
    train->add_option("--batch-size", tr.batch_size, "mini-batch size")->capture_default_str();
    train->add_option("--alpha", tr.alpha, "Adam learning rate")->capture_default_str();
    train->add_flag("--paper-init", tr.paper_init, "raw U[0,1) weights, no fan-in scaling");
    train->add_option("--out", tr.out, "checkpoint path")->capture_default_str();
    train->add_option("--history", tr.history, "per-epoch loss CSV path");
    train->callback([&] { run_train(tr); });

    EvalArgs ev;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint against a dataset");
    eval_cmd->add_option("--model", ev.model, "checkpoint path, or oracle:series")->required();
    eval_cmd->add_option("--data", ev.data, "dataset directory or CSV path")->required();
    eval_cmd->add_option("--thresholds", ev.thresholds, "theta values, mol/m^3")->delimiter(',');
    eval_cmd->add_option("--split", ev.split, "all|train|validation|test")->capture_default_str();
    eval_cmd->add_option("--out", ev.out, "also write the report CSV here");
    eval_cmd->callback([&] { run_eval(ev); });

    SweepArgs sw;
    CLI::App* sweep = app.add_subcommand("sweep", "batch-count, coefficient, or Damkohler study");
    sweep->add_option("--kind", sw.kind, "batch|k|de|damkohler")->required();
    sweep->add_option("--model", sw.model, "checkpoint (k/de/damkohler kinds)");
    sweep->add_option("--out", sw.out, "output directory")->capture_default_str();
    sweep->add_option("--values", sw.values, "swept coefficient values")->delimiter(',');
    sweep->add_option("--counts", sw.counts, "batch counts (kind=batch)")->delimiter(',');
    sweep->add_option("--seed", sw.seed)->capture_default_str();
    sweep->add_option("--batch-size", sw.batch_size, "samples per batch (kind=batch)")
        ->capture_default_str();
    sweep->add_option("--c0", sw.c0)->capture_default_str();
    sweep->add_option("--half-thickness", sw.half_thickness)->capture_default_str();
    sweep->add_option("--k", sw.fixed_k, "fixed k for kind=de")->capture_default_str();
    sweep->add_option("--de", sw.fixed_de, "fixed de for kind=k")->capture_default_str();
    sweep->add_option("--c0-range", sw.gen.c0_range, "kind=batch sampling range")->delimiter(',');
    sweep->add_option("--half-thickness-range", sw.gen.l_range)->delimiter(',');
    sweep->add_option("--t-years-range", sw.gen.t_years_range)->delimiter(',');
    sweep->add_option("--k-range", sw.gen.k_range)->delimiter(',');
    sweep->add_option("--de-range", sw.gen.de_range)->delimiter(',');
    sweep->add_option("--hidden", sw.net.hidden)->delimiter(',');
    sweep->add_option("--lambda", sw.net.lambda)->capture_default_str();
    sweep->add_option("--epochs", sw.net.epochs)->capture_default_str();
    sweep->add_option("--alpha", sw.net.alpha)->capture_default_str();
    sweep->add_option("--net-batch-size", sw.net.batch_size, "mini-batch size (kind=batch)")
        ->capture_default_str();
    sweep->add_option("--net-seed", sw.net.seed, "training seed (kind=batch)")->capture_default_str();
    sweep->add_option("--jobs", sw.jobs)->capture_default_str();
    sweep->callback([&] { run_sweep(sw); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NonFinite& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const MalformedFile& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const VersionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
