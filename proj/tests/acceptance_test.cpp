// Acceptance gate: ten go/no-go checks, each printed as a single PASS/FAIL
// line with its measured detail and runtime. Exits nonzero when any check
// fails. Budgets are enforced where a check carries one.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <deepspread/backtest.hpp>
#include <deepspread/classifiers.hpp>
#include <deepspread/features.hpp>
#include <deepspread/market_data.hpp>
#include <deepspread/metrics.hpp>
#include <deepspread/pca.hpp>
#include <deepspread/pipeline.hpp>
#include <deepspread/rbm.hpp>
#include <deepspread/rng.hpp>
#include <deepspread/synth.hpp>

#include "test_support.hpp"

using namespace deepspread;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

int g_failures = 0;

std::string format(const char* fmt, ...) {
    char buffer[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buffer, sizeof buffer, fmt, args);
    va_end(args);
    return buffer;
}

void report(int id, const char* name, double budget_seconds,
            const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = budget_seconds <= 0.0 || seconds <= budget_seconds;
    const bool passed = outcome.passed && in_budget;
    std::printf("[%s] %2d. %s (%s; %.2fs%s)\n", passed ? "PASS" : "FAIL", id, name,
                outcome.detail.c_str(), seconds, in_budget ? "" : ", over budget");
    std::fflush(stdout);
    if (!passed) ++g_failures;
}

AlignedPair make_test_pair(const std::vector<double>& a, const std::vector<double>& b) {
    AlignedPair p;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int day = static_cast<int>(i);
        p.dates.push_back(Date{1995 + day / 336, 1 + (day / 28) % 12, 1 + day % 28});
        p.prices_a.push_back(a[i]);
        p.prices_b.push_back(b[i]);
    }
    return p;
}

// Four symmetric points whose sample covariance (divisor n) is exactly
// scaled_v1 scaled_v1' + scaled_v2 scaled_v2'.
AlignedPair pair_with_covariance(const Eigen::Vector2d& scaled_v1,
                                 const Eigen::Vector2d& scaled_v2) {
    const double s = std::sqrt(2.0);
    return make_test_pair(
        {s * scaled_v1.x(), -s * scaled_v1.x(), s * scaled_v2.x(), -s * scaled_v2.x()},
        {s * scaled_v1.y(), -s * scaled_v1.y(), s * scaled_v2.y(), -s * scaled_v2.y()});
}

double population_variance(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    return var / static_cast<double>(xs.size());
}

std::vector<double> first_differences(const std::vector<double>& xs) {
    std::vector<double> d;
    for (std::size_t i = 1; i < xs.size(); ++i) d.push_back(xs[i] - xs[i - 1]);
    return d;
}

Eigen::MatrixXd random_binary(int rows, int cols, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(0.5);
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = coin(rng) ? 1.0 : 0.0;
    return m;
}

Eigen::VectorXd flatten_gradient(const RbmGradient& g) {
    Eigen::VectorXd out(g.weights.size() + g.visible_bias.size() + g.hidden_bias.size());
    Eigen::Index at = 0;
    for (Eigen::Index i = 0; i < g.weights.size(); ++i) out(at++) = g.weights.data()[i];
    for (Eigen::Index i = 0; i < g.visible_bias.size(); ++i) out(at++) = g.visible_bias(i);
    for (Eigen::Index i = 0; i < g.hidden_bias.size(); ++i) out(at++) = g.hidden_bias(i);
    return out;
}

// Scaled train/val feature matrices built from the default synthetic pair the
// same way the pipeline prepares them: features over the full pair, rows
// assigned to splits by their position in the pair, scaler fitted on train.
struct PreparedFeatures {
    FeatureMatrix train;
    FeatureMatrix val;
};

PreparedFeatures prepare_scaled_features() {
    auto [series_a, series_b] = generate_pair(SynthConfig{});
    AlignedPair pair = align(series_a, series_b);
    FeatureMatrix all = build_features(pair);

    const std::size_t n = pair.size();
    const auto n_train =
        static_cast<std::size_t>(std::floor(static_cast<double>(n) * SplitSpec{}.train_frac));
    const auto n_val =
        static_cast<std::size_t>(std::floor(static_cast<double>(n) * SplitSpec{}.val_frac));
    const std::size_t offset = n - static_cast<std::size_t>(all.n_rows());

    auto cut = [&](std::size_t begin, std::size_t end) {
        FeatureMatrix out;
        out.column_names = all.column_names;
        out.rows = all.rows.middleRows(static_cast<Eigen::Index>(begin - offset),
                                       static_cast<Eigen::Index>(end - begin));
        out.dates.assign(all.dates.begin() + static_cast<long>(begin - offset),
                         all.dates.begin() + static_cast<long>(end - offset));
        return out;
    };
    FeatureMatrix train_raw = cut(offset, n_train);
    FeatureMatrix val_raw = cut(n_train, n_train + n_val);

    MinMaxScaler scaler = fit_scaler(train_raw);
    return {apply_scaler(scaler, train_raw), apply_scaler(scaler, val_raw)};
}

// Planted-signal sample: features uniform in [0,1]^20, label agreeing with a
// fixed linear rule with probability 0.65.
struct PlantedData {
    Eigen::MatrixXd X;
    std::vector<int> y;
};

PlantedData planted_signal(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PlantedData data;
    data.X.resize(n, 20);
    data.y.resize(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < 20; ++j) data.X(i, j) = unit(rng);
        const double rule = (data.X(i, 0) - 0.5) + 0.8 * (data.X(i, 1) - 0.5) +
                            0.6 * (data.X(i, 2) - 0.5);
        const int clean = rule > 0 ? 1 : -1;
        data.y[i] = unit(rng) < 0.65 ? clean : -clean;
    }
    return data;
}

Dataset as_dataset(const Eigen::MatrixXd& X, const std::vector<int>& y) {
    Dataset d;
    d.features.rows = X;
    d.labels = y;
    for (int i = 0; i < X.rows(); ++i) {
        d.features.dates.push_back(Date{2000 + i / 336, 1 + (i / 28) % 12, 1 + i % 28});
    }
    for (int j = 0; j < X.cols(); ++j) {
        d.features.column_names.push_back("f" + std::to_string(j));
    }
    return d;
}

// ---------------------------------------------------------------------------
// 1. closed-form 2x2 PCA vs the power-iteration oracle
// ---------------------------------------------------------------------------

Outcome check_pca_oracle() {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_vector = 0.0, worst_ratio = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        // eigengap of at least 5% so the oracle provably converges
        const double lambda1 = 0.2 + 4.8 * unit(rng);
        const double lambda2 = lambda1 * 0.95 * unit(rng);
        const double phi = 3.141592653589793 * unit(rng);
        const Eigen::Vector2d v1(std::cos(phi), std::sin(phi));
        const Eigen::Vector2d v2(-std::sin(phi), std::cos(phi));
        AlignedPair pair =
            pair_with_covariance(std::sqrt(lambda1) * v1, std::sqrt(lambda2) * v2);

        PcaResult closed = pca_2d(pair);
        Eigen::Matrix2d cov = testsupport::sample_covariance(pair.prices_a, pair.prices_b);
        auto [first, second] = testsupport::power_iteration_2x2(cov);

        worst_vector =
            std::max(worst_vector,
                     testsupport::vector_distance_up_to_sign(
                         Eigen::Vector2d(closed.loadings.row(0).transpose()), first.vector));
        worst_vector =
            std::max(worst_vector,
                     testsupport::vector_distance_up_to_sign(
                         Eigen::Vector2d(closed.loadings.row(1).transpose()), second.vector));
        const double total = first.value + second.value;
        worst_ratio = std::max(
            worst_ratio, std::abs(closed.explained_variance_ratio(0) - first.value / total));
    }
    return {worst_vector <= 1e-8 && worst_ratio <= 1e-8,
            format("1000 matrices, max eigenvector err %.2e, max ratio err %.2e", worst_vector,
                   worst_ratio)};
}

// ---------------------------------------------------------------------------
// 2. synthetic pair: dominant PC1, minimal-variance PC2 spread
// ---------------------------------------------------------------------------

Outcome check_minimal_risk() {
    auto [series_a, series_b] = generate_pair(SynthConfig{});
    AlignedPair pair = align(series_a, series_b);
    PairSplit split = chronological_split(pair, SplitSpec{});

    Standardizer stats = fit_standardizer(split.train);
    AlignedPair z_train = standardize(split.train, stats);
    PcaResult pca = pca_2d(z_train);
    const double ratio1 = pca.explained_variance_ratio(0);

    PortfolioSeries spread =
        portfolio_price(split.train, Eigen::Vector2d(pca.loadings.row(1).transpose()), &stats);
    const double var_spread = population_variance(first_differences(spread.prices));
    const double var_a = population_variance(first_differences(z_train.prices_a));
    const double var_b = population_variance(first_differences(z_train.prices_b));

    const bool passed = ratio1 >= 0.99 && var_spread < var_a && var_spread < var_b;
    return {passed, format("PC1 ratio %.4f, diff-variance spread %.3e vs legs %.3e / %.3e",
                           ratio1, var_spread, var_a, var_b)};
}

// ---------------------------------------------------------------------------
// 3. CD-10 estimate vs the enumerated exact gradient
// ---------------------------------------------------------------------------

Outcome check_cd_correctness() {
    std::mt19937_64 rng(7771);
    std::normal_distribution<double> gauss(0.0, 0.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double min_cosine = 1.0, max_fd_err = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        RbmLayer layer;
        layer.kind = RbmKind::BernoulliBernoulli;
        layer.weights = Eigen::MatrixXd::NullaryExpr(3, 2, [&] { return gauss(rng); });
        layer.visible_bias = Eigen::VectorXd::NullaryExpr(3, [&] { return gauss(rng); });
        layer.hidden_bias = Eigen::VectorXd::NullaryExpr(2, [&] { return gauss(rng); });

        // Columns use distinct Bernoulli rates so the data statistics differ
        // from the model's: uniform data can make the exact gradient nearly
        // vanish, and near zero the CD estimator's bias (not its variance)
        // dominates the direction, which no amount of seed averaging fixes.
        const double p[3] = {0.05 + 0.9 * unit(rng), 0.05 + 0.9 * unit(rng),
                             0.05 + 0.9 * unit(rng)};
        Eigen::MatrixXd data(30, 3);
        for (Eigen::Index r = 0; r < data.rows(); ++r)
            for (Eigen::Index c = 0; c < data.cols(); ++c)
                data(r, c) = unit(rng) < p[c] ? 1.0 : 0.0;

        const Eigen::VectorXd exact = flatten_gradient(exact_gradient(layer, data));

        CdConfig config;
        config.cd_steps = 10;
        config.learning_rate = 1.0;  // the update then equals the gradient estimate
        Eigen::VectorXd mean_estimate = Eigen::VectorXd::Zero(exact.size());
        const int seeds = 100;
        for (int s = 0; s < seeds; ++s) {
            Rng chain = make_rng(static_cast<std::uint64_t>(draw * 1000 + s), "acceptance.cd10");
            RbmLayer after = cd_update(layer, data, config, chain);
            RbmGradient estimate;
            estimate.weights = after.weights - layer.weights;
            estimate.visible_bias = after.visible_bias - layer.visible_bias;
            estimate.hidden_bias = after.hidden_bias - layer.hidden_bias;
            mean_estimate += flatten_gradient(estimate);
        }
        mean_estimate /= seeds;
        min_cosine = std::min(
            min_cosine, exact.dot(mean_estimate) / (exact.norm() * mean_estimate.norm()));

        // the exact gradient itself vs central finite differences of the
        // enumerated log-likelihood (deterministic, so a subset suffices)
        if (draw < 10) {
            const double h = 1e-5;
            Eigen::VectorXd numeric(exact.size());
            Eigen::Index at = 0;
            auto probe = [&](double* param) {
                const double saved = *param;
                *param = saved + h;
                const double up = exact_log_likelihood(layer, data);
                *param = saved - h;
                const double down = exact_log_likelihood(layer, data);
                *param = saved;
                numeric(at++) = (up - down) / (2 * h);
            };
            for (Eigen::Index i = 0; i < layer.weights.size(); ++i)
                probe(layer.weights.data() + i);
            for (Eigen::Index i = 0; i < layer.visible_bias.size(); ++i)
                probe(layer.visible_bias.data() + i);
            for (Eigen::Index i = 0; i < layer.hidden_bias.size(); ++i)
                probe(layer.hidden_bias.data() + i);
            max_fd_err =
                std::max(max_fd_err, testsupport::gradient_relative_error(exact, numeric));
        }
    }
    return {min_cosine > 0.9 && max_fd_err <= 1e-5,
            format("min cosine %.3f over 100 draws, max FD rel err %.2e", min_cosine,
                   max_fd_err)};
}

// ---------------------------------------------------------------------------
// 4. stacked pretraining drives reconstruction error down
// ---------------------------------------------------------------------------

Outcome check_reconstruction_decrease() {
    PreparedFeatures features = prepare_scaled_features();

    CdConfig config;
    config.epochs = 100;
    config.minibatch_size = 100;
    config.rng_seed = 11;

    auto [model, traces] = dbn_pretrain(features.train, features.val, DbnSizes{}, config);
    bool passed = model.layers.size() == 2 && traces.size() == 2;
    std::string detail;
    for (std::size_t i = 0; i < traces.size() && passed; ++i) {
        const TrainTrace& t = traces[i];
        passed = !t.train_mse.empty() && t.train_mse.back() < t.train_mse.front() &&
                 !t.val_mse.empty() && t.val_mse.back() <= 2.0 * t.train_mse.back();
        detail += format("%slayer %zu train %.4f -> %.4f, val %.4f", i ? "; " : "", i + 1,
                         t.train_mse.empty() ? 0.0 : t.train_mse.front(),
                         t.train_mse.empty() ? 0.0 : t.train_mse.back(),
                         t.val_mse.empty() ? 0.0 : t.val_mse.back());
    }
    return {passed, detail};
}

// ---------------------------------------------------------------------------
// 5. analytic gradients vs finite differences
// ---------------------------------------------------------------------------

Outcome check_gradients() {
    std::mt19937_64 rng(909);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double worst_logreg = 0.0;
    {
        const int n = 30, d = 8;
        Eigen::MatrixXd X(n, d);
        std::vector<int> y(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < d; ++j) X(i, j) = gauss(rng);
            y[i] = gauss(rng) > 0 ? 1 : -1;
        }
        for (int point = 0; point < 20; ++point) {
            LogisticModel model;
            model.theta =
                Eigen::VectorXd::NullaryExpr(d + 1, [&](Eigen::Index) { return gauss(rng); });
            model.ridge_lambda = 0.03;
            const Eigen::VectorXd analytic = logreg_gradient(model, X, y);
            Eigen::VectorXd numeric(d + 1);
            const double h = 1e-6;
            for (int k = 0; k <= d; ++k) {
                const double saved = model.theta(k);
                model.theta(k) = saved + h;
                const double up = logreg_objective(model, X, y);
                model.theta(k) = saved - h;
                const double down = logreg_objective(model, X, y);
                model.theta(k) = saved;
                numeric(k) = (up - down) / (2 * h);
            }
            worst_logreg =
                std::max(worst_logreg, testsupport::gradient_relative_error(analytic, numeric));
        }
    }

    double worst_nn = 0.0;
    {
        CdConfig untrained;
        untrained.epochs = 0;
        FeatureMatrix dummy_train;
        dummy_train.rows = Eigen::MatrixXd::Constant(4, 20, 0.5);
        dummy_train.dates.resize(4);
        FeatureMatrix no_val;
        auto [dbn, traces] = dbn_pretrain(dummy_train, no_val, DbnSizes{}, untrained);

        Eigen::MatrixXd X(5, 20);
        Eigen::VectorXd targets(5);
        for (int point = 0; point < 20; ++point) {
            Rng seed_rng = make_rng(static_cast<std::uint64_t>(point), "acceptance.nn.init");
            NeuralNet net = nn_from_dbn(dbn, seed_rng);
            // jitter every parameter so each point probes a fresh location
            for (auto& w : net.weights)
                for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] += 0.5 * gauss(rng);
            for (auto& b : net.biases)
                for (Eigen::Index i = 0; i < b.size(); ++i) b(i) += 0.5 * gauss(rng);
            for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = gauss(rng);
            for (int i = 0; i < 5; ++i) targets(i) = (i % 2 == 0) ? 1.0 : 0.0;

            const Eigen::VectorXd analytic = nn_gradient(net, X, targets);
            Eigen::VectorXd numeric(analytic.size());
            const double h = 1e-6;
            Eigen::Index at = 0;
            auto probe = [&](double* param) {
                const double saved = *param;
                *param = saved + h;
                const double up = nn_loss(net, X, targets);
                *param = saved - h;
                const double down = nn_loss(net, X, targets);
                *param = saved;
                numeric(at++) = (up - down) / (2 * h);
            };
            for (std::size_t l = 0; l < net.weights.size(); ++l) {
                for (Eigen::Index i = 0; i < net.weights[l].size(); ++i)
                    probe(net.weights[l].data() + i);
                for (Eigen::Index i = 0; i < net.biases[l].size(); ++i)
                    probe(net.biases[l].data() + i);
            }
            worst_nn =
                std::max(worst_nn, testsupport::gradient_relative_error(analytic, numeric));
        }
    }

    return {worst_logreg <= 1e-5 && worst_nn <= 1e-4,
            format("logistic max rel err %.2e (tol 1e-5), network %.2e (tol 1e-4)", worst_logreg,
                   worst_nn)};
}

// ---------------------------------------------------------------------------
// 6. SMO: dual feasibility, XOR, separable held-out accuracy
// ---------------------------------------------------------------------------

Outcome check_svm() {
    Eigen::MatrixXd xor_X(4, 2);
    xor_X << 0, 0, 0, 1, 1, 0, 1, 1;
    const std::vector<int> xor_y = {-1, 1, 1, -1};
    SvmModel xor_model = svm_train(xor_X, xor_y, 10.0, 1.0);
    bool xor_ok = true;
    for (int i = 0; i < 4; ++i) {
        const double f = svm_decision(xor_model, xor_X.row(i).transpose());
        xor_ok = xor_ok && ((f >= 0.0 ? 1 : -1) == xor_y[i]);
    }

    std::mt19937_64 rng(313);
    std::normal_distribution<double> gauss(0.0, 0.45);
    auto sample = [&](int n, Eigen::MatrixXd& X, std::vector<int>& y) {
        X.resize(n, 2);
        y.resize(n);
        for (int i = 0; i < n; ++i) {
            const bool up = i % 2 == 0;
            X(i, 0) = gauss(rng) + (up ? 1.5 : -1.5);
            X(i, 1) = gauss(rng) + (up ? 1.5 : -1.5);
            y[i] = up ? 1 : -1;
        }
    };
    Eigen::MatrixXd train_X, test_X;
    std::vector<int> train_y, test_y;
    sample(200, train_X, train_y);
    sample(200, test_X, test_y);

    const double C = 5.0;
    SvmModel model = svm_train(train_X, train_y, C, 0.5);

    // dual_coefficients holds alpha_i * y_i, so feasibility reads
    // |sum| ~ 0 and |coef| <= C
    const double equality_gap = std::abs(model.dual_coefficients.sum());
    double box_excess = 0.0;
    for (Eigen::Index i = 0; i < model.dual_coefficients.size(); ++i) {
        box_excess = std::max(box_excess, std::abs(model.dual_coefficients(i)) - C);
    }

    int correct = 0;
    for (int i = 0; i < 200; ++i) {
        const double f = svm_decision(model, test_X.row(i).transpose());
        if ((f >= 0.0 ? 1 : -1) == test_y[i]) ++correct;
    }
    const double accuracy = correct / 200.0;

    const bool passed =
        xor_ok && equality_gap <= 1e-6 && box_excess <= 1e-6 && accuracy >= 0.95;
    return {passed, format("XOR %s, |sum(alpha*y)| %.1e, box excess %.1e, test accuracy %.3f",
                           xor_ok ? "separated" : "FAILED", equality_gap,
                           std::max(box_excess, 0.0), accuracy)};
}

// ---------------------------------------------------------------------------
// 7. every classifier recovers a planted signal; the random baseline does not
// ---------------------------------------------------------------------------

Outcome check_planted_signal() {
    PlantedData train = planted_signal(1500, 101);
    PlantedData test = planted_signal(500, 202);

    Dataset train_set = as_dataset(train.X, train.y);
    Dataset test_set = as_dataset(test.X, test.y);
    MinMaxScaler scaler = fit_scaler(train_set.features);
    FeatureMatrix scaled_train = apply_scaler(scaler, train_set.features);

    std::string detail;
    bool passed = true;
    auto evaluate = [&](const char* name, ClassifierModel model) {
        TrainedClassifier classifier;
        classifier.model = std::move(model);
        classifier.scaler = scaler;  // no DBN: models consume scaled features
        const std::vector<int> predictions = classifier_predict(classifier, test_set);
        const DirectionalRates rates = precision_recall(confusion(predictions, test_set.labels));
        const double up = rates.recall_up.value_or(0.0);
        const double down = rates.recall_down.value_or(0.0);
        passed = passed && up >= 0.55 && down >= 0.55;
        detail += format("%s%s %.3f/%.3f", detail.empty() ? "" : ", ", name, up, down);
    };

    evaluate("logistic", logreg_train(scaled_train.rows, train.y, 1e-4, 0.1, 3000));
    evaluate("svm", svm_train(scaled_train.rows, train.y, 1.0, 0.1));

    // the network starts from an untrained (randomly initialized) layer stack
    CdConfig untrained;
    untrained.epochs = 0;
    untrained.rng_seed = 5;
    FeatureMatrix no_val;
    auto [raw_dbn, traces] = dbn_pretrain(scaled_train, no_val, DbnSizes{}, untrained);
    Rng nn_init = make_rng(7, "acceptance.planted.nn");
    NeuralNet net = nn_from_dbn(raw_dbn, nn_init);
    NnTrainConfig nn_config;
    nn_config.epochs = 2000;
    nn_config.minibatch_size = 100;
    nn_config.learning_rate = 0.5;
    nn_config.momentum = 0.5;
    nn_config.rng_seed = 3;
    auto [trained_net, trace] = nn_train(net, scaled_train.rows, train.y, nn_config);
    evaluate("network", trained_net);

    const std::vector<int> coin = random_baseline(test_set.labels.size(), 99);
    const double random_accuracy = confusion(coin, test_set.labels).accuracy();
    passed = passed && random_accuracy >= 0.45 && random_accuracy <= 0.55;
    detail += format(", random %.3f", random_accuracy);

    return {passed, "recalls up/down " + detail};
}

// ---------------------------------------------------------------------------
// 8. published-style rates and pairwise-statistic AUC parity
// ---------------------------------------------------------------------------

Outcome check_metrics_parity() {
    auto percent2 = [](double ratio) {
        char buffer[32];
        std::snprintf(buffer, sizeof buffer, "%.2f", ratio * 100.0);
        return std::string(buffer);
    };

    ConfusionCounts c1;  // recall_up exactly 60.00%
    c1.tp = 177;
    c1.fn = 118;
    c1.tn = c1.fp = 1;
    ConfusionCounts c2;  // recall_down 61.69%
    c2.tn = 190;
    c2.fp = 118;
    c2.tp = c2.fn = 1;
    ConfusionCounts c3;  // precision_up 62.58%
    c3.tp = 102;
    c3.fp = 61;
    c3.tn = c3.fn = 1;
    ConfusionCounts c4;  // precision_down 58.59%
    c4.tn = 58;
    c4.fn = 41;
    c4.tp = c4.fp = 1;

    const bool table_ok = *precision_recall(c1).recall_up == 0.6 &&
                          percent2(*precision_recall(c1).recall_up) == "60.00" &&
                          percent2(*precision_recall(c2).recall_down) == "61.69" &&
                          percent2(*precision_recall(c3).precision_up) == "62.58" &&
                          percent2(*precision_recall(c4).precision_down) == "58.59";

    std::mt19937_64 rng(515);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> size_of(2, 50);
    std::uniform_int_distribution<int> quantized(0, 9);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = size_of(rng);
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        const bool ties = trial % 2 == 0;  // half the trials force heavy ties
        for (int i = 0; i < n; ++i) {
            scores[i] = ties ? quantized(rng) / 10.0 : unit(rng);
            labels[i] = unit(rng) < 0.5 ? 1 : -1;
        }
        labels[0] = 1;
        labels[n - 1] = -1;
        const double expected = testsupport::brute_force_auc(scores, labels);
        worst = std::max(worst, std::abs(roc(scores, labels).auc - expected));
    }

    return {table_ok && worst <= 1e-12,
            format("table rates %s, max |AUC - pairwise statistic| %.2e",
                   table_ok ? "exact" : "WRONG", worst)};
}

// ---------------------------------------------------------------------------
// 9. backtest accounting identities
// ---------------------------------------------------------------------------

Outcome check_backtest_identities() {
    std::mt19937_64 rng(616);
    std::normal_distribution<double> step(0.0, 0.4);
    const int n = 160;
    std::vector<double> a(n), b(n);
    a[0] = 118.0;
    b[0] = 126.0;
    for (int i = 1; i < n; ++i) {
        const double common = step(rng);
        a[i] = a[i - 1] + common + 0.3 * step(rng);
        b[i] = b[i - 1] + common + 0.3 * step(rng);
    }
    AlignedPair pair = make_test_pair(a, b);

    StrategyConfig config;
    config.transaction_cost_per_contract = 0.0;
    std::vector<int> signals, flipped;
    for (int t = 0; t + config.horizon_days < n; ++t) {
        signals.push_back(rng() % 2 == 0 ? 1 : -1);
        flipped.push_back(-signals.back());
    }

    double worst = 0.0;

    // linearity in position size
    PnlLedger base = simulate(pair, signals, config);
    StrategyConfig doubled = config;
    doubled.size_a *= 2;
    doubled.size_b *= 2;
    PnlLedger twice = simulate(pair, signals, doubled);
    for (std::size_t i = 0; i < base.positions.size(); ++i) {
        worst = std::max(worst, std::abs(twice.positions[i].pnl - 2.0 * base.positions[i].pnl));
    }

    // signal-inversion antisymmetry (costless)
    PnlLedger anti = simulate(pair, flipped, config);
    for (std::size_t i = 0; i < base.positions.size(); ++i) {
        worst = std::max(worst, std::abs(base.positions[i].pnl + anti.positions[i].pnl));
    }

    // per-position sum equals the final cumulative value, costs included
    StrategyConfig costly = config;
    costly.transaction_cost_per_contract = 2.0;
    PnlLedger paid = simulate(pair, signals, costly);
    double total = 0.0;
    for (const Position& pos : paid.positions) total += pos.pnl;
    worst = std::max(worst, std::abs(paid.cumulative_pnl.back() - total));

    // flat market: exactly zero without costs
    AlignedPair flat =
        make_test_pair(std::vector<double>(40, 100.0), std::vector<double>(40, 50.0));
    PnlLedger nothing = simulate(flat, std::vector<int>(20, 1), config);
    worst = std::max(worst, std::abs(summarize(nothing).total_pnl));

    // perfect foresight wins every position
    std::vector<int> oracle;
    for (int t = 0; t + config.horizon_days < n; ++t) {
        const double move =
            config.size_a * config.point_value_a * (a[t + config.horizon_days] - a[t]) -
            config.size_b * config.point_value_b * (b[t + config.horizon_days] - b[t]);
        oracle.push_back(move > 0 ? -1 : 1);  // -1 opens a long under the literal rule
    }
    const double hit_rate = summarize(simulate(pair, oracle, config)).hit_rate;

    const bool passed = worst <= 1e-9 && hit_rate == 1.0;
    return {passed,
            format("max identity residual %.2e, foresight hit rate %.2f", worst, hit_rate)};
}

// ---------------------------------------------------------------------------
// 10. two identical runs, byte-identical artifacts
// ---------------------------------------------------------------------------

Outcome check_determinism() {
    const fs::path out =
        fs::temp_directory_path() /
        ("deepspread_acceptance_" +
         std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    fs::create_directories(out);

    PipelineConfig config;
    config.output_dir = out.string();
    auto [csv_a, csv_b] = run_synth(config);
    config.csv_a = csv_a;
    config.csv_b = csv_b;

    run_pipeline(config);

    // snapshot every artifact except the wall-clock sidecar
    std::map<std::string, std::string> snapshot;
    for (const auto& entry : fs::recursive_directory_iterator(out)) {
        if (!entry.is_regular_file()) continue;
        const std::string rel = fs::relative(entry.path(), out).generic_string();
        if (rel == "timings.json") continue;
        snapshot[rel] = read_text_file(entry.path().string());
    }

    run_pipeline(config);  // overwrites in place

    std::size_t same = 0, differing = 0;
    for (const auto& [rel, bytes] : snapshot) {
        if (read_text_file((out / rel).string()) == bytes) {
            ++same;
        } else {
            ++differing;
        }
    }

    std::error_code ec;
    fs::remove_all(out, ec);
    return {differing == 0 && same > 0,
            format("%zu artifacts compared, %zu differ", same + differing, differing)};
}

}  // namespace

int main() {
    std::printf("acceptance gate: spread-portfolio learning pipeline\n");

    report(1, "closed-form 2x2 PCA matches the power-iteration oracle", 5.0, check_pca_oracle);
    report(2, "synthetic pair: PC1 >= 0.99 and the spread has minimal daily variance", 10.0,
           check_minimal_risk);
    report(3, "CD-10 direction agrees with the enumerated exact gradient", 60.0,
           check_cd_correctness);
    report(4, "RBM reconstruction error decreases over 100 epochs", 180.0,
           check_reconstruction_decrease);
    report(5, "logistic and network gradients match finite differences", 30.0, check_gradients);
    report(6, "SMO dual feasibility, XOR separation, separable accuracy", 30.0, check_svm);
    report(7, "all classifiers beat the random baseline on a planted signal", 300.0,
           check_planted_signal);
    report(8, "table-style rates exact; AUC equals the pairwise statistic", 0.0,
           check_metrics_parity);
    report(9, "backtest accounting identities hold to 1e-9", 10.0, check_backtest_identities);
    report(10, "two identical pipeline runs produce byte-identical artifacts", 600.0,
           check_determinism);

    if (g_failures == 0) {
        std::printf("all 10 acceptance checks passed\n");
        return 0;
    }
    std::printf("%d acceptance check(s) failed\n", g_failures);
    return 1;
}
