#include "deepspread/rbm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "deepspread/errors.hpp"
#include "deepspread/numeric.hpp"

namespace deepspread {

bool RbmLayer::finite() const {
    return weights.allFinite() && visible_bias.allFinite() && hidden_bias.allFinite();
}

void CdConfig::validate() const {
    if (cd_steps < 1) throw ValidationError("cd_steps must be >= 1");
    if (learning_rate && !(*learning_rate >= 0.0)) {
        throw ValidationError("learning_rate must be >= 0");
    }
    if (epochs < 0) throw ValidationError("epochs must be >= 0");
    if (minibatch_size < 1) throw ValidationError("minibatch_size must be >= 1");
}

double CdConfig::effective_learning_rate(RbmKind kind) const {
    if (learning_rate) return *learning_rate;
    return kind == RbmKind::GaussianBernoulli ? 0.01 : 0.1;
}

RbmLayer init_rbm_layer(RbmKind kind, Eigen::Index n_visible, Eigen::Index n_hidden, Rng& rng) {
    if (n_visible < 1 || n_hidden < 1) {
        throw ValidationError("RBM layer sizes must be >= 1");
    }
    RbmLayer layer;
    layer.kind = kind;
    layer.weights.resize(n_visible, n_hidden);
    std::normal_distribution<double> weight_dist(0.0, 0.01);
    for (Eigen::Index i = 0; i < n_visible; ++i) {
        for (Eigen::Index j = 0; j < n_hidden; ++j) {
            layer.weights(i, j) = weight_dist(rng);
        }
    }
    layer.visible_bias = Eigen::VectorXd::Zero(n_visible);
    layer.hidden_bias = Eigen::VectorXd::Zero(n_hidden);
    return layer;
}

namespace {

void check_visible_width(const RbmLayer& layer, const Eigen::MatrixXd& visible) {
    if (visible.cols() != layer.n_visible()) {
        throw ShapeError("batch has " + std::to_string(visible.cols()) +
                         " columns, layer expects " + std::to_string(layer.n_visible()));
    }
}

Eigen::MatrixXd sigmoid_matrix(Eigen::MatrixXd m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = sigmoid(m(i, j));
        }
    }
    return m;
}

Eigen::MatrixXd bernoulli_sample(const Eigen::MatrixXd& probabilities, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::MatrixXd states(probabilities.rows(), probabilities.cols());
    for (Eigen::Index i = 0; i < probabilities.rows(); ++i) {
        for (Eigen::Index j = 0; j < probabilities.cols(); ++j) {
            states(i, j) = unit(rng) < probabilities(i, j) ? 1.0 : 0.0;
        }
    }
    return states;
}

}  // namespace

Eigen::MatrixXd hidden_probabilities(const RbmLayer& layer, const Eigen::MatrixXd& visible) {
    check_visible_width(layer, visible);
    Eigen::MatrixXd pre = visible * layer.weights;
    pre.rowwise() += layer.hidden_bias.transpose();
    return sigmoid_matrix(std::move(pre));
}

Eigen::MatrixXd visible_reconstruction_mean(const RbmLayer& layer, const Eigen::MatrixXd& hidden) {
    if (hidden.cols() != layer.n_hidden()) {
        throw ShapeError("hidden batch has " + std::to_string(hidden.cols()) +
                         " columns, layer expects " + std::to_string(layer.n_hidden()));
    }
    Eigen::MatrixXd pre = hidden * layer.weights.transpose();
    pre.rowwise() += layer.visible_bias.transpose();
    if (layer.kind == RbmKind::BernoulliBernoulli) {
        return sigmoid_matrix(std::move(pre));
    }
    return pre;
}

Eigen::MatrixXd visible_reconstruction_sample(const RbmLayer& layer, const Eigen::MatrixXd& hidden,
                                              Rng& rng) {
    Eigen::MatrixXd mean = visible_reconstruction_mean(layer, hidden);
    if (layer.kind == RbmKind::BernoulliBernoulli) {
        return bernoulli_sample(mean, rng);
    }
    std::normal_distribution<double> noise(0.0, 1.0);
    for (Eigen::Index i = 0; i < mean.rows(); ++i) {
        for (Eigen::Index j = 0; j < mean.cols(); ++j) {
            mean(i, j) += noise(rng);
        }
    }
    return mean;
}

RbmLayer cd_update(const RbmLayer& layer, const Eigen::MatrixXd& minibatch, const CdConfig& config,
                   Rng& rng) {
    config.validate();
    check_visible_width(layer, minibatch);
    if (minibatch.rows() == 0) {
        throw EmptyInputError("CD update on an empty minibatch");
    }
    const auto batch = static_cast<double>(minibatch.rows());

    // Positive phase on the data, then k sampled Gibbs half-steps with
    // mean-field visible reconstructions.
    Eigen::MatrixXd pos_hidden = hidden_probabilities(layer, minibatch);
    Eigen::MatrixXd hidden_states = bernoulli_sample(pos_hidden, rng);
    Eigen::MatrixXd neg_visible;
    Eigen::MatrixXd neg_hidden;
    for (int step = 0; step < config.cd_steps; ++step) {
        neg_visible = visible_reconstruction_mean(layer, hidden_states);
        neg_hidden = hidden_probabilities(layer, neg_visible);
        if (step + 1 < config.cd_steps) {
            hidden_states = bernoulli_sample(neg_hidden, rng);
        }
    }

    const double lr = config.effective_learning_rate(layer.kind);
    RbmLayer updated = layer;
    updated.weights += lr / batch * (minibatch.transpose() * pos_hidden -
                                     neg_visible.transpose() * neg_hidden);
    updated.visible_bias += lr / batch * (minibatch - neg_visible).colwise().sum().transpose();
    updated.hidden_bias += lr / batch * (pos_hidden - neg_hidden).colwise().sum().transpose();
    if (!updated.finite()) {
        throw DivergenceError("RBM parameters became non-finite during a CD update");
    }
    return updated;
}

double reconstruction_mse(const RbmLayer& layer, const Eigen::MatrixXd& data) {
    check_visible_width(layer, data);
    if (data.rows() == 0) {
        throw EmptyInputError("reconstruction MSE of an empty batch");
    }
    Eigen::MatrixXd hidden = hidden_probabilities(layer, data);
    Eigen::MatrixXd recon = visible_reconstruction_mean(layer, hidden);
    return (data - recon).squaredNorm() / static_cast<double>(data.size());
}

std::pair<RbmLayer, TrainTrace> train_rbm(const RbmLayer& layer, const Eigen::MatrixXd& train,
                                          const Eigen::MatrixXd& val, const CdConfig& config) {
    config.validate();
    check_visible_width(layer, train);
    if (train.rows() == 0) {
        throw EmptyInputError("cannot train an RBM on an empty matrix");
    }

    // Separate streams so that disabling the shuffle leaves the Gibbs draws
    // untouched.
    Rng shuffle_rng = make_rng(config.rng_seed, "rbm.shuffle");
    Rng gibbs_rng = make_rng(config.rng_seed, "rbm.gibbs");

    const Eigen::Index n = train.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    RbmLayer current = layer;
    TrainTrace trace;
    trace.train_mse.reserve(static_cast<std::size_t>(config.epochs));
    trace.val_mse.reserve(static_cast<std::size_t>(config.epochs));

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle_each_epoch) {
            std::shuffle(order.begin(), order.end(), shuffle_rng);
        }
        for (Eigen::Index start = 0; start < n; start += config.minibatch_size) {
            const Eigen::Index count = std::min<Eigen::Index>(config.minibatch_size, n - start);
            Eigen::MatrixXd minibatch(count, train.cols());
            for (Eigen::Index r = 0; r < count; ++r) {
                minibatch.row(r) = train.row(order[static_cast<std::size_t>(start + r)]);
            }
            current = cd_update(current, minibatch, config, gibbs_rng);
        }
        trace.train_mse.push_back(reconstruction_mse(current, train));
        if (val.rows() > 0) {
            trace.val_mse.push_back(reconstruction_mse(current, val));
        }
    }
    return {std::move(current), std::move(trace)};
}

namespace {

// E(v,h) = -b'v - c'h - v'Wh for the Bernoulli-Bernoulli energy.
double bernoulli_energy(const RbmLayer& layer, const Eigen::VectorXd& v, const Eigen::VectorXd& h) {
    return -layer.visible_bias.dot(v) - layer.hidden_bias.dot(h) - v.dot(layer.weights * h);
}

Eigen::VectorXd bits_of(std::uint32_t pattern, Eigen::Index width) {
    Eigen::VectorXd v(width);
    for (Eigen::Index i = 0; i < width; ++i) {
        v(i) = (pattern >> i) & 1u ? 1.0 : 0.0;
    }
    return v;
}

void check_enumerable(const RbmLayer& layer) {
    if (layer.kind != RbmKind::BernoulliBernoulli) {
        throw ValidationError("exact enumeration requires a Bernoulli-Bernoulli layer");
    }
    if (layer.n_visible() + layer.n_hidden() > 16) {
        throw ValidationError("exact enumeration is limited to n_visible + n_hidden <= 16");
    }
}

}  // namespace

RbmGradient exact_gradient(const RbmLayer& layer, const Eigen::MatrixXd& data) {
    check_enumerable(layer);
    check_visible_width(layer, data);
    if (data.rows() == 0) {
        throw EmptyInputError("exact gradient of an empty batch");
    }

    const Eigen::Index nv = layer.n_visible();
    const Eigen::Index nh = layer.n_hidden();

    // Model expectations from the full joint distribution.
    double z = 0.0;
    Eigen::MatrixXd model_vh = Eigen::MatrixXd::Zero(nv, nh);
    Eigen::VectorXd model_v = Eigen::VectorXd::Zero(nv);
    Eigen::VectorXd model_h = Eigen::VectorXd::Zero(nh);
    for (std::uint32_t vp = 0; vp < (1u << nv); ++vp) {
        const Eigen::VectorXd v = bits_of(vp, nv);
        for (std::uint32_t hp = 0; hp < (1u << nh); ++hp) {
            const Eigen::VectorXd h = bits_of(hp, nh);
            const double weight = std::exp(-bernoulli_energy(layer, v, h));
            z += weight;
            model_vh += weight * v * h.transpose();
            model_v += weight * v;
            model_h += weight * h;
        }
    }
    model_vh /= z;
    model_v /= z;
    model_h /= z;

    // Data expectations: h is marginalized analytically via p(h|v).
    const auto n = static_cast<double>(data.rows());
    Eigen::MatrixXd pos_hidden = hidden_probabilities(layer, data);
    RbmGradient grad;
    grad.weights = data.transpose() * pos_hidden / n - model_vh;
    grad.visible_bias = data.colwise().mean().transpose() - model_v;
    grad.hidden_bias = pos_hidden.colwise().mean().transpose() - model_h;
    return grad;
}

double exact_log_likelihood(const RbmLayer& layer, const Eigen::MatrixXd& data) {
    check_enumerable(layer);
    check_visible_width(layer, data);
    if (data.rows() == 0) {
        throw EmptyInputError("log-likelihood of an empty batch");
    }

    const Eigen::Index nv = layer.n_visible();
    const Eigen::Index nh = layer.n_hidden();

    double z = 0.0;
    for (std::uint32_t vp = 0; vp < (1u << nv); ++vp) {
        const Eigen::VectorXd v = bits_of(vp, nv);
        for (std::uint32_t hp = 0; hp < (1u << nh); ++hp) {
            z += std::exp(-bernoulli_energy(layer, v, bits_of(hp, nh)));
        }
    }

    double ll = 0.0;
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        const Eigen::VectorXd v = data.row(r).transpose();
        double unnormalized = 0.0;
        for (std::uint32_t hp = 0; hp < (1u << nh); ++hp) {
            unnormalized += std::exp(-bernoulli_energy(layer, v, bits_of(hp, nh)));
        }
        ll += std::log(unnormalized) - std::log(z);
    }
    return ll / static_cast<double>(data.rows());
}

std::pair<DbnModel, std::vector<TrainTrace>> dbn_pretrain(const FeatureMatrix& train,
                                                          const FeatureMatrix& val, DbnSizes sizes,
                                                          const CdConfig& config) {
    config.validate();
    if (sizes.hidden1 < 1 || sizes.hidden2 < 1) {
        throw ValidationError("DBN hidden sizes must be >= 1");
    }
    if (train.n_rows() == 0) {
        throw EmptyInputError("cannot pretrain on an empty feature matrix");
    }

    DbnModel model;
    std::vector<TrainTrace> traces;

    Rng init1 = make_rng(config.rng_seed, "dbn.init.layer1");
    RbmLayer layer1 = init_rbm_layer(RbmKind::GaussianBernoulli, train.n_cols(), sizes.hidden1, init1);
    CdConfig config1 = config;
    config1.rng_seed = derive_subseed(config.rng_seed, "dbn.train.layer1");
    auto [trained1, trace1] = train_rbm(layer1, train.rows, val.rows, config1);
    model.layers.push_back(trained1);
    traces.push_back(std::move(trace1));

    // The second layer trains on the first layer's hidden probabilities.
    Eigen::MatrixXd train2 = hidden_probabilities(trained1, train.rows);
    Eigen::MatrixXd val2;
    if (val.n_rows() > 0) {
        val2 = hidden_probabilities(trained1, val.rows);
    }

    Rng init2 = make_rng(config.rng_seed, "dbn.init.layer2");
    RbmLayer layer2 = init_rbm_layer(RbmKind::BernoulliBernoulli, sizes.hidden1, sizes.hidden2, init2);
    CdConfig config2 = config;
    config2.rng_seed = derive_subseed(config.rng_seed, "dbn.train.layer2");
    auto [trained2, trace2] = train_rbm(layer2, train2, val2, config2);
    model.layers.push_back(trained2);
    traces.push_back(std::move(trace2));

    return {std::move(model), std::move(traces)};
}

Eigen::MatrixXd dbn_transform(const DbnModel& model, const Eigen::MatrixXd& features,
                              LatentMode mode, std::uint64_t seed) {
    if (model.layers.empty()) {
        throw ValidationError("cannot transform with an empty DBN");
    }
    Eigen::MatrixXd current = features;
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
        current = hidden_probabilities(model.layers[i], current);
    }
    if (mode == LatentMode::Threshold) {
        return (current.array() >= 0.5).cast<double>();
    }
    Rng rng = make_rng(seed, "dbn.transform.sample");
    return bernoulli_sample(current, rng);
}

Eigen::MatrixXd dbn_transform(const DbnModel& model, const FeatureMatrix& features,
                              LatentMode mode, std::uint64_t seed) {
    return dbn_transform(model, features.rows, mode, seed);
}

}  // namespace deepspread
