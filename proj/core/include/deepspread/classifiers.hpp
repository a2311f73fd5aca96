#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "deepspread/features.hpp"
#include "deepspread/rbm.hpp"
#include "deepspread/rng.hpp"

namespace deepspread {

// ---------------------------------------------------------------------------
// Logistic regression (ridge-penalized, gradient ascent on the likelihood)
// ---------------------------------------------------------------------------

struct LogisticModel {
    Eigen::VectorXd theta;  // (d+1)-vector, theta[0] is the bias
    double ridge_lambda = 0.0;
};

/// Mean log-likelihood of {+1,-1} labels minus lambda * ||theta_1..d||^2
/// (bias unpenalized).
double logreg_objective(const LogisticModel& model, const Eigen::MatrixXd& X,
                        const std::vector<int>& y);

Eigen::VectorXd logreg_gradient(const LogisticModel& model, const Eigen::MatrixXd& X,
                                const std::vector<int>& y);

/// Full-batch gradient ascent from theta = 0. Deterministic. Throws
/// DivergenceError (naming the epoch) on a non-finite objective.
LogisticModel logreg_train(const Eigen::MatrixXd& X, const std::vector<int>& y, double lambda,
                           double learning_rate, int epochs);

/// phi(x); the predicted label is +1 iff the score >= 0.5.
double logreg_score(const LogisticModel& model, const Eigen::VectorXd& x);

// ---------------------------------------------------------------------------
// Soft-margin SVM with RBF kernel, trained by sequential minimal optimization
// ---------------------------------------------------------------------------

struct SvmModel {
    Eigen::MatrixXd support_vectors;      // rows = support vectors
    Eigen::VectorXd dual_coefficients;    // alpha_i * y_i
    double bias = 0.0;
    double kernel_gamma = 0.0;
    double cost = 0.0;
};

struct SvmTrainOptions {
    double kkt_tolerance = 1e-3;
    std::int64_t max_pair_updates = 1000000;
};

/// K(u, v) = exp(-gamma * ||u - v||^2).
double rbf_kernel(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double gamma);

/// SMO with working-set selection by maximal KKT violation. Throws DataError
/// if only one class is present, ConvergenceError (with the residual) when
/// the pair-update cap is hit before the KKT gap reaches tolerance.
SvmModel svm_train(const Eigen::MatrixXd& X, const std::vector<int>& y, double cost, double gamma,
                   const SvmTrainOptions& options = {});

/// sum_i alpha_i y_i K(x_i, x) + b; the predicted label is sign, with a tie
/// at exactly 0 mapping to +1.
double svm_decision(const SvmModel& model, const Eigen::VectorXd& x);

// ---------------------------------------------------------------------------
// Feedforward network seeded from the DBN reconstruction weights
// ---------------------------------------------------------------------------

/// Sigmoid-activated network 20 -> 15 -> 20 -> 1 (weights stored input x
/// output per layer).
struct NeuralNet {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
    double momentum = 0.5;
    double learning_rate = 0.1;

    Eigen::Index n_inputs() const { return weights.empty() ? 0 : weights.front().rows(); }
    bool finite() const;
};

/// Hidden layers take the DBN layer weights and hidden biases; the output
/// layer is drawn Normal(0, 0.01 std) from the given stream with zero bias.
NeuralNet nn_from_dbn(const DbnModel& dbn, Rng& rng);

/// Batch MSE between sigmoid outputs and {0,1} targets.
double nn_loss(const NeuralNet& net, const Eigen::MatrixXd& X, const Eigen::VectorXd& targets01);

/// Backpropagated gradient of nn_loss, flattened layer by layer
/// (weights then bias per layer).
Eigen::VectorXd nn_gradient(const NeuralNet& net, const Eigen::MatrixXd& X,
                            const Eigen::VectorXd& targets01);

struct NnTrainConfig {
    int epochs = 100;
    int minibatch_size = 100;
    double learning_rate = 0.1;
    double momentum = 0.5;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

/// Minibatch gradient descent on MSE with classical momentum
/// (v <- mu*v - lr*grad, theta <- theta + v). Labels are {+1,-1}, mapped to
/// {0,1} targets internally. Records full-train MSE per epoch. Throws
/// DivergenceError naming the epoch on a non-finite loss.
std::pair<NeuralNet, std::vector<double>> nn_train(const NeuralNet& net, const Eigen::MatrixXd& X,
                                                   const std::vector<int>& y,
                                                   const NnTrainConfig& config);

/// Forward pass; the predicted label is +1 iff the output >= 0.5.
double nn_score(const NeuralNet& net, const Eigen::VectorXd& x);

// ---------------------------------------------------------------------------
// Trained classifier with its full input pipeline
// ---------------------------------------------------------------------------

/// Test/baseline model: emits the dataset's own labels as predictions.
struct OraclePassthrough {};

using ClassifierModel = std::variant<LogisticModel, SvmModel, NeuralNet, OraclePassthrough>;

/// Classifier bundled with the scaler and DBN needed to map raw feature rows
/// to the latent space it was trained on.
struct TrainedClassifier {
    ClassifierModel model;
    MinMaxScaler scaler;
    DbnModel dbn;
    LatentMode latent_mode = LatentMode::Threshold;

    std::string kind() const;
};

/// Model-native score for one raw (unscaled) feature row: probability for
/// logistic/NN, decision value for SVM.
double classifier_score(const TrainedClassifier& classifier, const Eigen::VectorXd& raw_features);

/// +1/-1 prediction per dataset row (ties map to +1; SVM threshold is 0,
/// probability models 0.5). OraclePassthrough returns the dataset labels.
std::vector<int> classifier_predict(const TrainedClassifier& classifier, const Dataset& dataset);

/// Model-native scores per dataset row (for ROC curves).
std::vector<double> classifier_scores(const TrainedClassifier& classifier, const Dataset& dataset);

}  // namespace deepspread
