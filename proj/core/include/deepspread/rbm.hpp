#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "deepspread/features.hpp"
#include "deepspread/rng.hpp"

namespace deepspread {

enum class RbmKind { GaussianBernoulli, BernoulliBernoulli };

/// One restricted Boltzmann machine layer. Gaussian visible units have fixed
/// unit variance; inputs are expected min-max scaled.
struct RbmLayer {
    RbmKind kind = RbmKind::BernoulliBernoulli;
    Eigen::MatrixXd weights;       // n_visible x n_hidden
    Eigen::VectorXd visible_bias;  // n_visible
    Eigen::VectorXd hidden_bias;   // n_hidden

    Eigen::Index n_visible() const { return weights.rows(); }
    Eigen::Index n_hidden() const { return weights.cols(); }
    bool finite() const;
};

/// Greedy stack of RBMs. The canonical model is 20 -> 15 (Gaussian-Bernoulli)
/// followed by 15 -> 20 (Bernoulli-Bernoulli).
struct DbnModel {
    std::vector<RbmLayer> layers;
};

struct CdConfig {
    int cd_steps = 1;
    /// Effective rate is per layer kind when unset: 0.01 for
    /// Gaussian-Bernoulli, 0.1 for Bernoulli-Bernoulli.
    std::optional<double> learning_rate;
    int epochs = 100;
    int minibatch_size = 100;
    std::uint64_t rng_seed = 0;
    bool shuffle_each_epoch = true;

    void validate() const;
    double effective_learning_rate(RbmKind kind) const;
};

/// Per-epoch reconstruction MSE (data vs its one-step mean-field
/// reconstruction) on the train and validation sets.
struct TrainTrace {
    std::vector<double> train_mse;
    std::vector<double> val_mse;
};

/// Gradient of the mean log-likelihood w.r.t. (weights, visible_bias,
/// hidden_bias); also used for CD update steps.
struct RbmGradient {
    Eigen::MatrixXd weights;
    Eigen::VectorXd visible_bias;
    Eigen::VectorXd hidden_bias;
};

/// Zero biases, weights ~ Normal(0, 0.01 std) from the seeded stream.
RbmLayer init_rbm_layer(RbmKind kind, Eigen::Index n_visible, Eigen::Index n_hidden, Rng& rng);

/// p(h_j = 1 | v) = sigmoid(c_j + sum_i v_i w_ij), row-wise over a batch.
Eigen::MatrixXd hidden_probabilities(const RbmLayer& layer, const Eigen::MatrixXd& visible);

/// Mean-field reconstruction of the visible layer from hidden states:
/// Bernoulli kind gives probabilities sigmoid(b + W h), Gaussian kind gives
/// the mean b + W h.
Eigen::MatrixXd visible_reconstruction_mean(const RbmLayer& layer, const Eigen::MatrixXd& hidden);

/// Sampling reconstruction: Bernoulli draws for the Bernoulli kind, mean
/// plus unit-variance Gaussian noise for the Gaussian kind.
Eigen::MatrixXd visible_reconstruction_sample(const RbmLayer& layer, const Eigen::MatrixXd& hidden,
                                              Rng& rng);

/// One CD-k update on a minibatch (rows = samples). Hidden states are
/// sampled along the Gibbs chain, visible states are mean-field
/// reconstructions, and the final expectation uses hidden probabilities.
/// Returns the updated layer. Throws DivergenceError if parameters become
/// non-finite.
RbmLayer cd_update(const RbmLayer& layer, const Eigen::MatrixXd& minibatch, const CdConfig& config,
                   Rng& rng);

/// Full CD training loop: per epoch, optionally shuffle, partition into
/// minibatches, cd_update each, then record reconstruction MSE on train and
/// validation. Deterministic given config.rng_seed.
std::pair<RbmLayer, TrainTrace> train_rbm(const RbmLayer& layer, const Eigen::MatrixXd& train,
                                          const Eigen::MatrixXd& val, const CdConfig& config);

/// Mean data reconstruction MSE through one mean-field up-down pass.
double reconstruction_mse(const RbmLayer& layer, const Eigen::MatrixXd& data);

/// Exact mean log-likelihood gradient of a Bernoulli-Bernoulli RBM by
/// enumerating all 2^(n_visible + n_hidden) joint states. Test oracle for
/// contrastive divergence; requires n_visible + n_hidden <= 16.
RbmGradient exact_gradient(const RbmLayer& layer, const Eigen::MatrixXd& data);

/// Exact mean log-likelihood by the same enumeration.
double exact_log_likelihood(const RbmLayer& layer, const Eigen::MatrixXd& data);

struct DbnSizes {
    Eigen::Index hidden1 = 15;
    Eigen::Index hidden2 = 20;
};

/// Greedy layerwise pretraining: the first (Gaussian-Bernoulli) layer is
/// trained on the scaled features, its hidden probabilities become the
/// second (Bernoulli) layer's training input.
std::pair<DbnModel, std::vector<TrainTrace>> dbn_pretrain(const FeatureMatrix& train,
                                                          const FeatureMatrix& val, DbnSizes sizes,
                                                          const CdConfig& config);

enum class LatentMode { Threshold, Sample };

/// Forward pass through the stack with a binarized top layer: Threshold maps
/// probability >= 0.5 to 1 (deterministic), Sample draws Bernoulli states
/// from the seeded stream.
Eigen::MatrixXd dbn_transform(const DbnModel& model, const Eigen::MatrixXd& features,
                              LatentMode mode = LatentMode::Threshold, std::uint64_t seed = 0);

Eigen::MatrixXd dbn_transform(const DbnModel& model, const FeatureMatrix& features,
                              LatentMode mode = LatentMode::Threshold, std::uint64_t seed = 0);

}  // namespace deepspread
