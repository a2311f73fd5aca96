#include "deepspread/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "deepspread/errors.hpp"
#include "deepspread/numeric.hpp"

namespace deepspread {

namespace {

void check_labels(const Eigen::MatrixXd& X, const std::vector<int>& y) {
    if (static_cast<std::size_t>(X.rows()) != y.size()) {
        throw ShapeError("feature matrix has " + std::to_string(X.rows()) + " rows but " +
                         std::to_string(y.size()) + " labels");
    }
    if (y.empty()) {
        throw EmptyInputError("no training rows");
    }
    for (int label : y) {
        if (label != 1 && label != -1) {
            throw ValidationError("labels must be +1 or -1");
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Logistic regression
// ---------------------------------------------------------------------------

double logreg_objective(const LogisticModel& model, const Eigen::MatrixXd& X,
                        const std::vector<int>& y) {
    check_labels(X, y);
    if (model.theta.size() != X.cols() + 1) {
        throw ShapeError("theta has " + std::to_string(model.theta.size()) + " entries, expected " +
                         std::to_string(X.cols() + 1));
    }
    double ll = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const double margin = model.theta(0) + model.theta.tail(X.cols()).dot(X.row(i));
        ll += log_sigmoid(y[static_cast<std::size_t>(i)] * margin);
    }
    ll /= static_cast<double>(X.rows());
    return ll - model.ridge_lambda * model.theta.tail(X.cols()).squaredNorm();
}

Eigen::VectorXd logreg_gradient(const LogisticModel& model, const Eigen::MatrixXd& X,
                                const std::vector<int>& y) {
    check_labels(X, y);
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(model.theta.size());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const double yi = y[static_cast<std::size_t>(i)];
        const double margin = model.theta(0) + model.theta.tail(X.cols()).dot(X.row(i));
        const double factor = yi * sigmoid(-yi * margin);  // d/dm log sigmoid(y m) * y
        grad(0) += factor;
        grad.tail(X.cols()) += factor * X.row(i).transpose();
    }
    grad /= static_cast<double>(X.rows());
    grad.tail(X.cols()) -= 2.0 * model.ridge_lambda * model.theta.tail(X.cols());
    return grad;
}

LogisticModel logreg_train(const Eigen::MatrixXd& X, const std::vector<int>& y, double lambda,
                           double learning_rate, int epochs) {
    check_labels(X, y);
    if (lambda < 0.0) throw ValidationError("ridge lambda must be >= 0");
    if (!(learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
    if (epochs < 1) throw ValidationError("epochs must be >= 1");

    LogisticModel model;
    model.theta = Eigen::VectorXd::Zero(X.cols() + 1);
    model.ridge_lambda = lambda;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        model.theta += learning_rate * logreg_gradient(model, X, y);
        if (!model.theta.allFinite()) {
            throw DivergenceError("logistic regression diverged at epoch " + std::to_string(epoch));
        }
    }
    return model;
}

double logreg_score(const LogisticModel& model, const Eigen::VectorXd& x) {
    if (model.theta.size() != x.size() + 1) {
        throw ShapeError("input has " + std::to_string(x.size()) + " entries, model expects " +
                         std::to_string(model.theta.size() - 1));
    }
    return sigmoid(model.theta(0) + model.theta.tail(x.size()).dot(x));
}

// ---------------------------------------------------------------------------
// SVM via sequential minimal optimization
// ---------------------------------------------------------------------------

double rbf_kernel(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double gamma) {
    return std::exp(-gamma * (u - v).squaredNorm());
}

namespace {

/// Kernel rows computed on demand and kept for reuse.
class KernelCache {
  public:
    KernelCache(const Eigen::MatrixXd& X, double gamma)
        : X_(X), gamma_(gamma), rows_(static_cast<std::size_t>(X.rows())) {}

    const Eigen::VectorXd& row(Eigen::Index i) {
        auto& entry = rows_[static_cast<std::size_t>(i)];
        if (entry.size() == 0) {
            entry.resize(X_.rows());
            for (Eigen::Index j = 0; j < X_.rows(); ++j) {
                entry(j) = rbf_kernel(X_.row(i).transpose(), X_.row(j).transpose(), gamma_);
            }
        }
        return entry;
    }

  private:
    const Eigen::MatrixXd& X_;
    double gamma_;
    std::vector<Eigen::VectorXd> rows_;
};

}  // namespace

SvmModel svm_train(const Eigen::MatrixXd& X, const std::vector<int>& y, double cost, double gamma,
                   const SvmTrainOptions& options) {
    check_labels(X, y);
    if (!(cost > 0.0)) throw ValidationError("SVM cost must be positive");
    if (!(gamma > 0.0)) throw ValidationError("RBF gamma must be positive");

    const Eigen::Index n = X.rows();
    bool has_pos = false, has_neg = false;
    for (int label : y) (label == 1 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) {
        throw DataError("SVM training needs both classes present");
    }

    // Dual problem: minimize 1/2 a'Qa - e'a with Q_ij = y_i y_j K_ij,
    // subject to 0 <= a_i <= C and y'a = 0. G = Qa - e is the gradient.
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd G = Eigen::VectorXd::Constant(n, -1.0);
    KernelCache cache(X, gamma);

    auto in_up = [&](Eigen::Index t) {
        return (y[static_cast<std::size_t>(t)] == 1 && alpha(t) < cost) ||
               (y[static_cast<std::size_t>(t)] == -1 && alpha(t) > 0.0);
    };
    auto in_low = [&](Eigen::Index t) {
        return (y[static_cast<std::size_t>(t)] == 1 && alpha(t) > 0.0) ||
               (y[static_cast<std::size_t>(t)] == -1 && alpha(t) < cost);
    };

    std::int64_t updates = 0;
    double gap = std::numeric_limits<double>::infinity();
    while (true) {
        // Most-violating pair: max over I_up and min over I_low of -y_t G_t.
        Eigen::Index i = -1, j = -1;
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < n; ++t) {
            const double score = -y[static_cast<std::size_t>(t)] * G(t);
            if (in_up(t) && score > gmax) {
                gmax = score;
                i = t;
            }
            if (in_low(t) && score < gmin) {
                gmin = score;
                j = t;
            }
        }
        gap = gmax - gmin;
        if (gap <= options.kkt_tolerance) break;
        if (updates >= options.max_pair_updates) {
            throw ConvergenceError("SMO hit the pair-update cap with KKT residual " +
                                   std::to_string(gap));
        }

        const double yi = y[static_cast<std::size_t>(i)];
        const double yj = y[static_cast<std::size_t>(j)];
        const Eigen::VectorXd& Ki = cache.row(i);
        const Eigen::VectorXd& Kj = cache.row(j);
        double eta = Ki(i) + Kj(j) - 2.0 * Ki(j);
        if (eta <= 0.0) eta = 1e-12;

        const double old_ai = alpha(i);
        const double old_aj = alpha(j);
        // Unconstrained step along the feasible direction, then clip to the box.
        const double delta = (-yi * G(i) + yj * G(j)) / eta;
        double ai = old_ai + yi * delta;
        double aj = old_aj - yj * delta;

        const double sum = yi * old_ai + yj * old_aj;
        if (ai < 0.0) ai = 0.0;
        if (ai > cost) ai = cost;
        aj = yj * (sum - yi * ai);
        if (aj < 0.0) aj = 0.0;
        if (aj > cost) aj = cost;
        ai = yi * (sum - yj * aj);
        if (ai < 0.0) ai = 0.0;
        if (ai > cost) ai = cost;

        const double dai = ai - old_ai;
        const double daj = aj - old_aj;
        alpha(i) = ai;
        alpha(j) = aj;
        for (Eigen::Index t = 0; t < n; ++t) {
            G(t) += y[static_cast<std::size_t>(t)] *
                    (yi * Ki(t) * dai + yj * Kj(t) * daj);
        }
        ++updates;
    }

    // rho from free support vectors (average of y G), else the bound midpoint.
    double rho;
    double free_sum = 0.0;
    int free_count = 0;
    for (Eigen::Index t = 0; t < n; ++t) {
        if (alpha(t) > 0.0 && alpha(t) < cost) {
            free_sum += y[static_cast<std::size_t>(t)] * G(t);
            ++free_count;
        }
    }
    if (free_count > 0) {
        rho = free_sum / free_count;
    } else {
        double ub = std::numeric_limits<double>::infinity();
        double lb = -std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < n; ++t) {
            const double yg = y[static_cast<std::size_t>(t)] * G(t);
            if (in_up(t)) ub = std::min(ub, yg);
            if (in_low(t)) lb = std::max(lb, yg);
        }
        rho = (ub + lb) / 2.0;
    }

    SvmModel model;
    model.kernel_gamma = gamma;
    model.cost = cost;
    model.bias = -rho;
    std::vector<Eigen::Index> sv_indices;
    for (Eigen::Index t = 0; t < n; ++t) {
        if (alpha(t) > 1e-8) sv_indices.push_back(t);
    }
    model.support_vectors.resize(static_cast<Eigen::Index>(sv_indices.size()), X.cols());
    model.dual_coefficients.resize(static_cast<Eigen::Index>(sv_indices.size()));
    for (std::size_t k = 0; k < sv_indices.size(); ++k) {
        const Eigen::Index t = sv_indices[k];
        model.support_vectors.row(static_cast<Eigen::Index>(k)) = X.row(t);
        model.dual_coefficients(static_cast<Eigen::Index>(k)) =
            alpha(t) * y[static_cast<std::size_t>(t)];
    }
    return model;
}

double svm_decision(const SvmModel& model, const Eigen::VectorXd& x) {
    if (model.support_vectors.cols() != x.size()) {
        throw ShapeError("input has " + std::to_string(x.size()) + " entries, model expects " +
                         std::to_string(model.support_vectors.cols()));
    }
    double value = model.bias;
    for (Eigen::Index k = 0; k < model.support_vectors.rows(); ++k) {
        value += model.dual_coefficients(k) *
                 rbf_kernel(model.support_vectors.row(k).transpose(), x, model.kernel_gamma);
    }
    return value;
}

// ---------------------------------------------------------------------------
// Neural network
// ---------------------------------------------------------------------------

bool NeuralNet::finite() const {
    for (const auto& w : weights) {
        if (!w.allFinite()) return false;
    }
    for (const auto& b : biases) {
        if (!b.allFinite()) return false;
    }
    return true;
}

void NnTrainConfig::validate() const {
    if (epochs < 1) throw ValidationError("epochs must be >= 1");
    if (minibatch_size < 1) throw ValidationError("minibatch_size must be >= 1");
    if (!(learning_rate >= 0.0)) throw ValidationError("learning rate must be >= 0");
    if (momentum < 0.0 || momentum >= 1.0) throw ValidationError("momentum must lie in [0,1)");
}

NeuralNet nn_from_dbn(const DbnModel& dbn, Rng& rng) {
    if (dbn.layers.empty()) {
        throw ValidationError("cannot build a network from an empty DBN");
    }
    NeuralNet net;
    for (const auto& layer : dbn.layers) {
        net.weights.push_back(layer.weights);
        net.biases.push_back(layer.hidden_bias);
    }
    const Eigen::Index top = dbn.layers.back().n_hidden();
    Eigen::MatrixXd out_weights(top, 1);
    std::normal_distribution<double> dist(0.0, 0.01);
    for (Eigen::Index i = 0; i < top; ++i) {
        out_weights(i, 0) = dist(rng);
    }
    net.weights.push_back(out_weights);
    net.biases.push_back(Eigen::VectorXd::Zero(1));
    return net;
}

namespace {

Eigen::MatrixXd sigmoid_matrix(Eigen::MatrixXd m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = sigmoid(m(i, j));
        }
    }
    return m;
}

/// Forward pass keeping each layer's activation (activations[0] = input).
std::vector<Eigen::MatrixXd> nn_forward(const NeuralNet& net, const Eigen::MatrixXd& X) {
    if (X.cols() != net.n_inputs()) {
        throw ShapeError("input has " + std::to_string(X.cols()) + " columns, network expects " +
                         std::to_string(net.n_inputs()));
    }
    std::vector<Eigen::MatrixXd> activations;
    activations.reserve(net.weights.size() + 1);
    activations.push_back(X);
    for (std::size_t layer = 0; layer < net.weights.size(); ++layer) {
        Eigen::MatrixXd pre = activations.back() * net.weights[layer];
        pre.rowwise() += net.biases[layer].transpose();
        activations.push_back(sigmoid_matrix(std::move(pre)));
    }
    return activations;
}

Eigen::Index nn_parameter_count(const NeuralNet& net) {
    Eigen::Index count = 0;
    for (std::size_t layer = 0; layer < net.weights.size(); ++layer) {
        count += net.weights[layer].size() + net.biases[layer].size();
    }
    return count;
}

}  // namespace

double nn_loss(const NeuralNet& net, const Eigen::MatrixXd& X, const Eigen::VectorXd& targets01) {
    if (X.rows() != targets01.size()) {
        throw ShapeError("batch has " + std::to_string(X.rows()) + " rows but " +
                         std::to_string(targets01.size()) + " targets");
    }
    if (X.rows() == 0) throw EmptyInputError("loss of an empty batch");
    const Eigen::MatrixXd out = nn_forward(net, X).back();
    return (out.col(0) - targets01).squaredNorm() / static_cast<double>(X.rows());
}

Eigen::VectorXd nn_gradient(const NeuralNet& net, const Eigen::MatrixXd& X,
                            const Eigen::VectorXd& targets01) {
    if (X.rows() != targets01.size()) {
        throw ShapeError("batch has " + std::to_string(X.rows()) + " rows but " +
                         std::to_string(targets01.size()) + " targets");
    }
    if (X.rows() == 0) throw EmptyInputError("gradient of an empty batch");

    const auto activations = nn_forward(net, X);
    const std::size_t n_layers = net.weights.size();
    const auto batch = static_cast<double>(X.rows());

    // delta = dL/d(pre-activation), starting from MSE at the sigmoid output.
    Eigen::MatrixXd delta = activations.back();
    delta.col(0) -= targets01;
    delta *= 2.0 / batch;
    delta.array() *= activations.back().array() * (1.0 - activations.back().array());

    std::vector<Eigen::MatrixXd> weight_grads(n_layers);
    std::vector<Eigen::VectorXd> bias_grads(n_layers);
    for (std::size_t layer = n_layers; layer-- > 0;) {
        weight_grads[layer] = activations[layer].transpose() * delta;
        bias_grads[layer] = delta.colwise().sum().transpose();
        if (layer > 0) {
            delta = delta * net.weights[layer].transpose();
            delta.array() *= activations[layer].array() * (1.0 - activations[layer].array());
        }
    }

    Eigen::VectorXd flat(nn_parameter_count(net));
    Eigen::Index offset = 0;
    for (std::size_t layer = 0; layer < n_layers; ++layer) {
        flat.segment(offset, weight_grads[layer].size()) =
            Eigen::Map<const Eigen::VectorXd>(weight_grads[layer].data(),
                                              weight_grads[layer].size());
        offset += weight_grads[layer].size();
        flat.segment(offset, bias_grads[layer].size()) = bias_grads[layer];
        offset += bias_grads[layer].size();
    }
    return flat;
}

std::pair<NeuralNet, std::vector<double>> nn_train(const NeuralNet& net, const Eigen::MatrixXd& X,
                                                   const std::vector<int>& y,
                                                   const NnTrainConfig& config) {
    config.validate();
    check_labels(X, y);
    if (X.cols() != net.n_inputs()) {
        throw ShapeError("training rows have " + std::to_string(X.cols()) +
                         " columns, network expects " + std::to_string(net.n_inputs()));
    }

    Eigen::VectorXd targets(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        targets(i) = (y[static_cast<std::size_t>(i)] + 1) / 2;  // {+1,-1} -> {1,0}
    }

    NeuralNet current = net;
    current.learning_rate = config.learning_rate;
    current.momentum = config.momentum;
    Eigen::VectorXd velocity = Eigen::VectorXd::Zero(nn_parameter_count(net));

    Rng shuffle_rng = make_rng(config.rng_seed, "nn.shuffle");
    const Eigen::Index n = X.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    std::vector<double> mse_trace;
    mse_trace.reserve(static_cast<std::size_t>(config.epochs));

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        for (Eigen::Index start = 0; start < n; start += config.minibatch_size) {
            const Eigen::Index count = std::min<Eigen::Index>(config.minibatch_size, n - start);
            Eigen::MatrixXd batch(count, X.cols());
            Eigen::VectorXd batch_targets(count);
            for (Eigen::Index r = 0; r < count; ++r) {
                batch.row(r) = X.row(order[static_cast<std::size_t>(start + r)]);
                batch_targets(r) = targets(order[static_cast<std::size_t>(start + r)]);
            }
            const Eigen::VectorXd grad = nn_gradient(current, batch, batch_targets);
            velocity = config.momentum * velocity - config.learning_rate * grad;

            Eigen::Index offset = 0;
            for (std::size_t layer = 0; layer < current.weights.size(); ++layer) {
                auto& w = current.weights[layer];
                w += Eigen::Map<const Eigen::MatrixXd>(velocity.data() + offset, w.rows(), w.cols());
                offset += w.size();
                current.biases[layer] += velocity.segment(offset, current.biases[layer].size());
                offset += current.biases[layer].size();
            }
        }
        const double mse = nn_loss(current, X, targets);
        if (!std::isfinite(mse) || !current.finite()) {
            throw DivergenceError("network training diverged at epoch " + std::to_string(epoch));
        }
        mse_trace.push_back(mse);
    }
    return {std::move(current), std::move(mse_trace)};
}

double nn_score(const NeuralNet& net, const Eigen::VectorXd& x) {
    return nn_forward(net, x.transpose()).back()(0, 0);
}

// ---------------------------------------------------------------------------
// Trained classifier wrapper
// ---------------------------------------------------------------------------

std::string TrainedClassifier::kind() const {
    struct Visitor {
        std::string operator()(const LogisticModel&) const { return "logreg"; }
        std::string operator()(const SvmModel&) const { return "svm"; }
        std::string operator()(const NeuralNet&) const { return "nn"; }
        std::string operator()(const OraclePassthrough&) const { return "oracle"; }
    };
    return std::visit(Visitor{}, model);
}

namespace {

/// Raw features -> scaled -> DBN latent codes (skipped when the classifier
/// carries no DBN, e.g. the network that consumes scaled features directly).
Eigen::MatrixXd to_model_space(const TrainedClassifier& classifier, const Eigen::MatrixXd& raw) {
    FeatureMatrix m;
    m.rows = raw;
    m.dates.resize(static_cast<std::size_t>(raw.rows()));
    const Eigen::MatrixXd scaled = apply_scaler(classifier.scaler, m).rows;
    if (classifier.dbn.layers.empty() || std::holds_alternative<NeuralNet>(classifier.model)) {
        return scaled;
    }
    return dbn_transform(classifier.dbn, scaled, classifier.latent_mode);
}

}  // namespace

double classifier_score(const TrainedClassifier& classifier, const Eigen::VectorXd& raw_features) {
    const Eigen::MatrixXd space = to_model_space(classifier, raw_features.transpose());
    const Eigen::VectorXd x = space.row(0).transpose();
    struct Visitor {
        const Eigen::VectorXd& x;
        double operator()(const LogisticModel& m) const { return logreg_score(m, x); }
        double operator()(const SvmModel& m) const { return svm_decision(m, x); }
        double operator()(const NeuralNet& m) const { return nn_score(m, x); }
        double operator()(const OraclePassthrough&) const {
            throw ValidationError("the passthrough model has no score function");
        }
    };
    return std::visit(Visitor{x}, classifier.model);
}

std::vector<int> classifier_predict(const TrainedClassifier& classifier, const Dataset& dataset) {
    if (std::holds_alternative<OraclePassthrough>(classifier.model)) {
        return dataset.labels;
    }
    const double threshold = std::holds_alternative<SvmModel>(classifier.model) ? 0.0 : 0.5;
    std::vector<int> predictions;
    predictions.reserve(static_cast<std::size_t>(dataset.features.n_rows()));
    for (double score : classifier_scores(classifier, dataset)) {
        predictions.push_back(score >= threshold ? 1 : -1);
    }
    return predictions;
}

std::vector<double> classifier_scores(const TrainedClassifier& classifier, const Dataset& dataset) {
    if (std::holds_alternative<OraclePassthrough>(classifier.model)) {
        std::vector<double> scores;
        scores.reserve(dataset.labels.size());
        for (int label : dataset.labels) {
            scores.push_back(label == 1 ? 1.0 : 0.0);
        }
        return scores;
    }
    const Eigen::MatrixXd space = to_model_space(classifier, dataset.features.rows);
    std::vector<double> scores;
    scores.reserve(static_cast<std::size_t>(space.rows()));
    struct Visitor {
        const Eigen::VectorXd& x;
        double operator()(const LogisticModel& m) const { return logreg_score(m, x); }
        double operator()(const SvmModel& m) const { return svm_decision(m, x); }
        double operator()(const NeuralNet& m) const { return nn_score(m, x); }
        double operator()(const OraclePassthrough&) const { return 0.0; }
    };
    for (Eigen::Index i = 0; i < space.rows(); ++i) {
        const Eigen::VectorXd x = space.row(i).transpose();
        scores.push_back(std::visit(Visitor{x}, classifier.model));
    }
    return scores;
}

}  // namespace deepspread
