#include <rdlab/errors.hpp>
#include <rdlab/mlp.hpp>
#include <rdlab/rng.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

namespace rdlab::mlp {

namespace {

using nlohmann::json;

constexpr int kCheckpointVersion = 1;
constexpr double kLeakySlope = 0.001;

template <typename Fn>
void for_each_param(NetworkParams& p, Fn&& fn) {
    for (int l = 0; l < p.layers(); ++l) {
        for (double& w : p.W[l].d) fn(w);
        for (double& b : p.B[l]) fn(b);
    }
}

NetworkParams zeros_like(const NetworkParams& p) {
    NetworkParams z;
    for (int l = 0; l < p.layers(); ++l) {
        z.W.emplace_back(p.W[l].rows, p.W[l].cols);
        z.B.emplace_back(p.B[l].size(), 0.0);
    }
    return z;
}

/// Normalized inputs and C/C0 targets for one split.
struct Pool {
    std::vector<double> X;  ///< row-major m x 6
    std::vector<double> y;
    int m = 0;
};

Pool build_pool(const std::vector<data::Sample>& samples, const data::NormStats& stats) {
    Pool p;
    p.m = static_cast<int>(samples.size());
    p.X.reserve(samples.size() * 6);
    p.y.reserve(samples.size());
    for (const data::Sample& s : samples) {
        data::Features z = data::normalize(s.features, stats);
        p.X.insert(p.X.end(), z.begin(), z.end());
        p.y.push_back(s.features[0] > 0.0 ? s.label / s.features[0] : 0.0);
    }
    return p;
}

double plain_mse(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return acc / static_cast<double>(a.size());
}

}  // namespace

void NetworkConfig::validate() const {
    if (layer_sizes.size() < 3)
        throw std::invalid_argument("NetworkConfig: need at least one hidden layer");
    if (layer_sizes.front() != 6 || layer_sizes.back() != 1)
        throw std::invalid_argument("NetworkConfig: layer sizes must start at 6 and end at 1");
    for (int n : layer_sizes)
        if (n < 1) throw std::invalid_argument("NetworkConfig: layer sizes must be >= 1");
    if (epochs < 0) throw std::invalid_argument("NetworkConfig: epochs must be >= 0");
    if (batch_size < 1) throw std::invalid_argument("NetworkConfig: batch_size must be >= 1");
    if (!(lambda >= 0.0)) throw std::invalid_argument("NetworkConfig: lambda must be >= 0");
}

NetworkParams init_params(const NetworkConfig& config, std::mt19937_64& rng) {
    config.validate();
    NetworkParams p;
    for (std::size_t l = 1; l < config.layer_sizes.size(); ++l) {
        int fan_in = config.layer_sizes[l - 1];
        int fan_out = config.layer_sizes[l];
        double scale = config.paper_unscaled_init ? 1.0 : 1.0 / std::sqrt(fan_in);
        Matrix W(fan_out, fan_in);
        for (double& w : W.d) w = scale * rng::uniform01(rng);
        std::vector<double> B(fan_out);
        for (double& b : B) b = -0.1 * rng::uniform01(rng);
        for (double& b : B)
            if (b == 0.0) b = -1e-12;  // keep strictly negative
        p.W.push_back(std::move(W));
        p.B.push_back(std::move(B));
    }
    return p;
}

double activate(double x, Activation kind) {
    if (kind == Activation::Sigmoid) return 1.0 / (1.0 + std::exp(-x));
    return x >= 0.0 ? x : kLeakySlope * x;
}

double activate_derivative(double x, Activation kind) {
    if (kind == Activation::Sigmoid) {
        double s = activate(x, Activation::Sigmoid);
        return s * (1.0 - s);
    }
    return x >= 0.0 ? 1.0 : kLeakySlope;
}

std::vector<double> forward(const NetworkParams& params, std::span<const double> inputs, int m,
                            ForwardCache* cache) {
    const int layers = params.layers();
    if (layers == 0) throw std::invalid_argument("forward: empty network");
    const int n0 = params.W.front().cols;
    if (static_cast<int>(inputs.size()) != m * n0)
        throw std::invalid_argument("forward: input size does not match width");

    if (cache) {
        cache->m = m;
        cache->z.assign(layers, {});
        cache->a.assign(layers + 1, {});
        cache->a[0].assign(inputs.begin(), inputs.end());
    }

    std::vector<double> cur(inputs.begin(), inputs.end());
    for (int l = 0; l < layers; ++l) {
        const Matrix& W = params.W[l];
        const std::vector<double>& B = params.B[l];
        const Activation act = (l == layers - 1) ? Activation::Sigmoid : Activation::LeakyReLU;
        std::vector<double> z(static_cast<std::size_t>(m) * W.rows);
        for (int s = 0; s < m; ++s) {
            const double* in = cur.data() + static_cast<std::size_t>(s) * W.cols;
            double* out = z.data() + static_cast<std::size_t>(s) * W.rows;
            for (int r = 0; r < W.rows; ++r) {
                const double* wrow = W.d.data() + static_cast<std::size_t>(r) * W.cols;
                double acc = B[r];
                for (int c = 0; c < W.cols; ++c) acc += wrow[c] * in[c];
                out[r] = acc;
            }
        }
        std::vector<double> a(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) {
            a[i] = activate(z[i], act);
            if (!std::isfinite(a[i]))
                throw NonFinite("forward: non-finite activation in layer " + std::to_string(l));
        }
        if (cache) {
            cache->z[l] = std::move(z);
            cache->a[l + 1] = a;
        }
        cur = std::move(a);
    }
    return cur;  // width 1 head: m values
}

double loss(std::span<const double> predictions, std::span<const double> targets,
            const NetworkParams& params, double lambda) {
    if (predictions.size() != targets.size() || predictions.empty())
        throw EmptyInput("loss: prediction/target lengths must match and be non-empty");
    const double m = static_cast<double>(predictions.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        acc += (predictions[i] - targets[i]) * (predictions[i] - targets[i]);
    double penalty = 0.0;
    if (lambda > 0.0)
        for (const Matrix& W : params.W)
            penalty = std::inner_product(W.d.begin(), W.d.end(), W.d.begin(), penalty);
    return acc / m + lambda / (2.0 * m) * penalty;
}

Gradients backward(const NetworkParams& params, const ForwardCache& cache,
                   std::span<const double> targets, double lambda) {
    const int layers = params.layers();
    const int m = cache.m;
    if (static_cast<int>(targets.size()) != m)
        throw std::invalid_argument("backward: target count does not match cache");

    Gradients g = zeros_like(params);
    // Output head: dJ/dz = (2/m)(a - y) sigmoid'(z).
    std::vector<double> delta(static_cast<std::size_t>(m));
    const std::vector<double>& out = cache.a[layers];
    for (int s = 0; s < m; ++s)
        delta[s] = 2.0 / m * (out[s] - targets[s]) * out[s] * (1.0 - out[s]);

    for (int l = layers - 1; l >= 0; --l) {
        const Matrix& W = params.W[l];
        const std::vector<double>& a_prev = cache.a[l];
        Matrix& gW = g.W[l];
        std::vector<double>& gB = g.B[l];
        for (int s = 0; s < m; ++s) {
            const double* dl = delta.data() + static_cast<std::size_t>(s) * W.rows;
            const double* ap = a_prev.data() + static_cast<std::size_t>(s) * W.cols;
            for (int r = 0; r < W.rows; ++r) {
                double d = dl[r];
                gB[r] += d;
                double* grow = gW.d.data() + static_cast<std::size_t>(r) * W.cols;
                for (int c = 0; c < W.cols; ++c) grow[c] += d * ap[c];
            }
        }
        if (lambda > 0.0)
            for (std::size_t i = 0; i < gW.d.size(); ++i) gW.d[i] += lambda / m * W.d[i];
        if (l > 0) {
            const std::vector<double>& z_prev = cache.z[l - 1];
            std::vector<double> next(static_cast<std::size_t>(m) * W.cols, 0.0);
            for (int s = 0; s < m; ++s) {
                const double* dl = delta.data() + static_cast<std::size_t>(s) * W.rows;
                double* nx = next.data() + static_cast<std::size_t>(s) * W.cols;
                for (int r = 0; r < W.rows; ++r) {
                    double d = dl[r];
                    const double* wrow = W.d.data() + static_cast<std::size_t>(r) * W.cols;
                    for (int c = 0; c < W.cols; ++c) nx[c] += d * wrow[c];
                }
                const double* zp = z_prev.data() + static_cast<std::size_t>(s) * W.cols;
                for (int c = 0; c < W.cols; ++c)
                    nx[c] *= activate_derivative(zp[c], Activation::LeakyReLU);
            }
            delta = std::move(next);
        }
    }
    return g;
}

double grad_check(const NetworkParams& params, std::span<const double> inputs, int m,
                  std::span<const double> targets, double lambda, double epsilon) {
    if (m < 1) throw EmptyInput("grad_check: empty batch");
    ForwardCache cache;
    std::vector<double> pred = forward(params, inputs, m, &cache);
    Gradients analytic = backward(params, cache, targets, lambda);

    // Relative errors are measured against the net's gradient scale: entries
    // attenuated through stacked 0.001 LeakyReLU slopes fall below the
    // ~1e-11 cancellation noise of central differences at epsilon = 1e-6 and
    // would otherwise dominate the report.
    double g_scale = 0.0;
    for (int l = 0; l < analytic.layers(); ++l) {
        for (double g : analytic.W[l].d) g_scale = std::max(g_scale, std::abs(g));
        for (double g : analytic.B[l]) g_scale = std::max(g_scale, std::abs(g));
    }
    const double floor = 1e-3 * g_scale;

    NetworkParams probe = params;
    double max_rel = 0.0;
    for (int l = 0; l < probe.layers(); ++l) {
        auto check_array = [&](std::vector<double>& arr, const std::vector<double>& grad) {
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const double saved = arr[i];
                arr[i] = saved + epsilon;
                double lp = loss(forward(probe, inputs, m), targets, probe, lambda);
                arr[i] = saved - epsilon;
                double lm = loss(forward(probe, inputs, m), targets, probe, lambda);
                arr[i] = saved;
                double numeric = (lp - lm) / (2.0 * epsilon);
                double a = grad[i];
                double denom = std::max({std::abs(a), std::abs(numeric), floor});
                if (denom == 0.0) continue;  // all gradients vanish identically
                max_rel = std::max(max_rel, std::abs(a - numeric) / denom);
            }
        };
        check_array(probe.W[l].d, analytic.W[l].d);
        check_array(probe.B[l], analytic.B[l]);
    }
    return max_rel;
}

void adam_step(NetworkParams& params, const Gradients& grads, AdamState& state,
               const AdamConfig& cfg) {
    if (state.step == 0) {
        state.m = zeros_like(params);
        state.v = zeros_like(params);
    }
    ++state.step;
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    for (int l = 0; l < params.layers(); ++l) {
        auto update = [&](std::vector<double>& p, std::vector<double>& m_, std::vector<double>& v_,
                          const std::vector<double>& g) {
            for (std::size_t i = 0; i < p.size(); ++i) {
                m_[i] = cfg.beta1 * m_[i] + (1.0 - cfg.beta1) * g[i];
                v_[i] = cfg.beta2 * v_[i] + (1.0 - cfg.beta2) * g[i] * g[i];
                p[i] -= cfg.alpha * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + cfg.epsilon);
            }
        };
        update(params.W[l].d, state.m.W[l].d, state.v.W[l].d, grads.W[l].d);
        update(params.B[l], state.m.B[l], state.v.B[l], grads.B[l]);
    }
}

std::pair<Checkpoint, TrainReport> train(const data::Dataset& ds, const NetworkConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();

    data::NormStats stats =
        ds.norm ? *ds.norm : data::compute_norm_stats(ds, data::NormMode::Standard);
    Pool train_pool = build_pool(ds.gather(data::Split::Train), stats);
    Pool val_pool = build_pool(ds.gather(data::Split::Validation), stats);
    if (train_pool.m == 0) throw EmptyInput("train: empty training split");
    if (val_pool.m == 0) throw EmptyInput("train: empty validation split");

    std::mt19937_64 init_rng(config.seed);
    NetworkParams params = init_params(config, init_rng);
    AdamState state;

    auto val_loss = [&](const NetworkParams& p) {
        return plain_mse(forward(p, val_pool.X, val_pool.m), val_pool.y);
    };

    TrainReport report;
    report.initial_validation_loss = val_loss(params);

    NetworkParams best = params;
    double best_val = report.initial_validation_loss;
    report.best_epoch = -1;

    std::mt19937_64 shuffle_rng(rng::derive_seed(config.seed, 0x51u));
    std::vector<int> order(train_pool.m);
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> bx, by;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng::shuffle(shuffle_rng, order);
        double epoch_loss = 0.0;
        long seen = 0;
        for (int start = 0; start < train_pool.m; start += config.batch_size) {
            const int bm = std::min(config.batch_size, train_pool.m - start);
            bx.assign(static_cast<std::size_t>(bm) * 6, 0.0);
            by.assign(bm, 0.0);
            for (int i = 0; i < bm; ++i) {
                int src = order[start + i];
                std::copy_n(train_pool.X.begin() + static_cast<std::size_t>(src) * 6, 6,
                            bx.begin() + static_cast<std::size_t>(i) * 6);
                by[i] = train_pool.y[src];
            }
            try {
                ForwardCache cache;
                std::vector<double> pred = forward(params, bx, bm, &cache);
                epoch_loss += loss(pred, by, params, config.lambda) * bm;
                Gradients g = backward(params, cache, by, config.lambda);
                adam_step(params, g, state, config.adam);
            } catch (const NonFinite& e) {
                throw NonFinite("train diverged at epoch " + std::to_string(epoch) + ", batch " +
                                std::to_string(start / config.batch_size) + ": " + e.what());
            }
            seen += bm;
        }
        report.train_loss.push_back(epoch_loss / static_cast<double>(seen));
        double vl = val_loss(params);
        report.validation_loss.push_back(vl);
        if (vl < best_val) {
            best_val = vl;
            best = params;
            report.best_epoch = epoch;
        }
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {Checkpoint{config, std::move(best), stats}, report};
}

double predict(const Checkpoint& ckpt, const data::Features& raw) {
    data::Features z = data::normalize(raw, ckpt.norm);
    std::vector<double> out = forward(ckpt.params, std::span<const double>(z.data(), 6), 1);
    return raw[0] * out[0];
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    json doc;
    doc["format_version"] = kCheckpointVersion;
    doc["config"] = {{"layer_sizes", ckpt.config.layer_sizes},
                     {"lambda", ckpt.config.lambda},
                     {"adam",
                      {{"alpha", ckpt.config.adam.alpha},
                       {"beta1", ckpt.config.adam.beta1},
                       {"beta2", ckpt.config.adam.beta2},
                       {"epsilon", ckpt.config.adam.epsilon}}},
                     {"epochs", ckpt.config.epochs},
                     {"seed", ckpt.config.seed},
                     {"batch_size", ckpt.config.batch_size},
                     {"paper_unscaled_init", ckpt.config.paper_unscaled_init}};
    doc["norm"] = {{"mode", ckpt.norm.mode == data::NormMode::PaperExact ? "paper_exact" : "standard"},
                   {"mu", ckpt.norm.mu},
                   {"sigma_sq", ckpt.norm.sigma_sq}};
    doc["layers"] = json::array();
    for (int l = 0; l < ckpt.params.layers(); ++l) {
        doc["layers"].push_back({{"rows", ckpt.params.W[l].rows},
                                 {"cols", ckpt.params.W[l].cols},
                                 {"weights", ckpt.params.W[l].d},
                                 {"biases", ckpt.params.B[l]}});
    }
    std::ofstream os(path);
    if (!os) throw MalformedFile("cannot open " + path.string() + " for writing");
    os << doc.dump(2) << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw MalformedFile("cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(is);
    } catch (const json::exception& e) {
        throw MalformedFile("bad checkpoint JSON: " + std::string(e.what()));
    }
    try {
        if (!doc.contains("format_version") || doc["format_version"].get<int>() != kCheckpointVersion)
            throw VersionMismatch("checkpoint format_version " +
                                  (doc.contains("format_version") ? doc["format_version"].dump()
                                                                  : std::string("missing")) +
                                  ", expected " + std::to_string(kCheckpointVersion));
        Checkpoint ckpt;
        const json& c = doc.at("config");
        ckpt.config.layer_sizes = c.at("layer_sizes").get<std::vector<int>>();
        ckpt.config.lambda = c.at("lambda").get<double>();
        ckpt.config.adam.alpha = c.at("adam").at("alpha").get<double>();
        ckpt.config.adam.beta1 = c.at("adam").at("beta1").get<double>();
        ckpt.config.adam.beta2 = c.at("adam").at("beta2").get<double>();
        ckpt.config.adam.epsilon = c.at("adam").at("epsilon").get<double>();
        ckpt.config.epochs = c.at("epochs").get<int>();
        ckpt.config.seed = c.at("seed").get<std::uint64_t>();
        ckpt.config.batch_size = c.at("batch_size").get<int>();
        ckpt.config.paper_unscaled_init = c.at("paper_unscaled_init").get<bool>();
        const json& n = doc.at("norm");
        ckpt.norm.mode = n.at("mode").get<std::string>() == "paper_exact"
                             ? data::NormMode::PaperExact
                             : data::NormMode::Standard;
        auto mu = n.at("mu").get<std::vector<double>>();
        auto sq = n.at("sigma_sq").get<std::vector<double>>();
        if (mu.size() != 6 || sq.size() != 6) throw MalformedFile("norm stats must be width 6");
        std::copy(mu.begin(), mu.end(), ckpt.norm.mu.begin());
        std::copy(sq.begin(), sq.end(), ckpt.norm.sigma_sq.begin());
        const json& layers = doc.at("layers");
        if (!layers.is_array() || layers.empty()) throw MalformedFile("missing layer array");
        for (const json& lj : layers) {
            Matrix W(lj.at("rows").get<int>(), lj.at("cols").get<int>());
            auto weights = lj.at("weights").get<std::vector<double>>();
            if (weights.size() != W.d.size())
                throw MalformedFile("layer weight count does not match rows*cols");
            W.d = std::move(weights);
            ckpt.params.W.push_back(std::move(W));
            ckpt.params.B.push_back(lj.at("biases").get<std::vector<double>>());
            if (ckpt.params.B.back().size() != static_cast<std::size_t>(ckpt.params.W.back().rows))
                throw MalformedFile("layer bias count does not match rows");
        }
        ckpt.config.validate();
        return ckpt;
    } catch (const json::exception& e) {
        throw MalformedFile("bad checkpoint structure: " + std::string(e.what()));
    }
}

}  // namespace rdlab::mlp
