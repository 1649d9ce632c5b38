#pragma once

#include <rdlab/dataset.hpp>

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace rdlab::mlp {

enum class Activation { LeakyReLU, Sigmoid };

struct AdamConfig {
    double alpha = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Architecture and training knobs. Hidden layers use LeakyReLU, the output
/// head is a single Sigmoid unit read as C/C0 and rescaled by the sample's
/// c0 at prediction time.
struct NetworkConfig {
    std::vector<int> layer_sizes{6, 64, 64, 32, 1};
    double lambda = 0.0;  ///< L2 coefficient on weights (biases excluded)
    AdamConfig adam{};
    int epochs = 0;
    std::uint64_t seed = 0;
    int batch_size = 128;
    /// Fidelity mode: keep the raw U[0,1) weight draw without the 1/sqrt(fan-in)
    /// scaling. Saturates deep Sigmoid heads; off by default.
    bool paper_unscaled_init = false;

    void validate() const;
};

struct Matrix {
    int rows = 0, cols = 0;
    std::vector<double> d;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), d(static_cast<std::size_t>(r) * c, 0.0) {}
    double& operator()(int r, int c) { return d[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return d[static_cast<std::size_t>(r) * cols + c]; }
};

/// Per layer l: weight matrix W[l] (n_l x n_{l-1}) and bias vector B[l].
struct NetworkParams {
    std::vector<Matrix> W;
    std::vector<std::vector<double>> B;

    int layers() const { return static_cast<int>(W.size()); }
};

using Gradients = NetworkParams;

struct AdamState {
    NetworkParams m, v;
    long step = 0;
};

/// Loss histories are on the normalized C/C0 scale. validation_loss is the
/// penalty-free MSE; train_loss averages the optimized objective (MSE plus
/// the L2 term) over the epoch's mini-batches.
struct TrainReport {
    double initial_validation_loss = 0.0;
    std::vector<double> train_loss;
    std::vector<double> validation_loss;
    int best_epoch = -1;  ///< epoch index of the retained parameters
    double wall_seconds = 0.0;
};

/// Weights uniform in [0,1) scaled by 1/sqrt(fan-in) (unless
/// paper_unscaled_init), biases uniform in [-0.1, 0). Deterministic per rng.
NetworkParams init_params(const NetworkConfig& config, std::mt19937_64& rng);

double activate(double x, Activation kind);
double activate_derivative(double x, Activation kind);

struct ForwardCache {
    int m = 0;
    std::vector<std::vector<double>> z;  ///< pre-activations per layer, m x n_l
    std::vector<std::vector<double>> a;  ///< a[0] is the input, a[l] = g(z[l])
};

/// Batched forward pass over m rows of width layer_sizes[0] (row-major).
/// Returns the m sigmoid outputs in [0,1]; fills `cache` when given.
/// Throws NonFinite if any activation is not finite.
std::vector<double> forward(const NetworkParams& params, std::span<const double> inputs, int m,
                            ForwardCache* cache = nullptr);

/// (1/m)||pred - targets||^2 + (lambda/2m) sum ||W||^2 (biases unpenalized).
double loss(std::span<const double> predictions, std::span<const double> targets,
            const NetworkParams& params, double lambda);

/// Exact gradients of loss() for every W and B entry, from a matching cache.
Gradients backward(const NetworkParams& params, const ForwardCache& cache,
                   std::span<const double> targets, double lambda);

/// Central-difference check of backward(); returns the max relative error
/// over all parameters (0 when both gradients vanish).
double grad_check(const NetworkParams& params, std::span<const double> inputs, int m,
                  std::span<const double> targets, double lambda, double epsilon);

void adam_step(NetworkParams& params, const Gradients& grads, AdamState& state,
               const AdamConfig& cfg);

/// Everything needed to reproduce predictions.
struct Checkpoint {
    NetworkConfig config;
    NetworkParams params;
    data::NormStats norm;
};

/// Mini-batch Adam over the shuffled training split; per-epoch validation
/// loss recorded and the best-validation parameters retained. Uses the
/// dataset's norm stats, computing Standard-mode stats when absent.
/// Deterministic for a fixed config.seed. Throws NonFinite (with epoch and
/// batch index) on divergence.
std::pair<Checkpoint, TrainReport> train(const data::Dataset& ds, const NetworkConfig& config);

/// c0 * forward(normalize(features)).
double predict(const Checkpoint& ckpt, const data::Features& raw);

/// Versioned JSON checkpoint: config, per-layer row-major weights, biases,
/// norm stats. Throws MalformedFile / VersionMismatch on load.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace rdlab::mlp
