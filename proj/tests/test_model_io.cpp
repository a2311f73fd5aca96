#include "doctest.h"

#include <deepspread/errors.hpp>
#include <deepspread/model_io.hpp>
#include <random>

using namespace deepspread;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = gauss(rng);
    return m;
}

DbnModel sample_dbn(std::uint64_t seed) {
    DbnModel model;
    RbmLayer l1;
    l1.kind = RbmKind::GaussianBernoulli;
    l1.weights = random_matrix(5, 3, seed);
    l1.visible_bias = random_matrix(5, 1, seed + 1).col(0);
    l1.hidden_bias = random_matrix(3, 1, seed + 2).col(0);
    RbmLayer l2;
    l2.kind = RbmKind::BernoulliBernoulli;
    l2.weights = random_matrix(3, 4, seed + 3);
    l2.visible_bias = random_matrix(3, 1, seed + 4).col(0);
    l2.hidden_bias = random_matrix(4, 1, seed + 5).col(0);
    model.layers = {l1, l2};
    return model;
}

}  // namespace

TEST_CASE("json text round trip and error handling") {
    nlohmann::json j = {{"a", 1}, {"b", 0.123456789012345678}};
    std::string text = dump_json(j);
    CHECK(text.back() == '\n');
    CHECK(load_json(text) == j);
    CHECK_THROWS_AS(load_json("{not json"), FormatError);
}

TEST_CASE("scaler round trip is bit exact") {
    MinMaxScaler scaler;
    scaler.col_min = random_matrix(20, 1, 1).col(0);
    scaler.col_max = scaler.col_min.array() + 0.5;
    MinMaxScaler back = scaler_from_json(load_json(dump_json(scaler_to_json(scaler))));
    CHECK(back.col_min == scaler.col_min);
    CHECK(back.col_max == scaler.col_max);
}

TEST_CASE("dbn round trip preserves layers and training settings") {
    DbnModel model = sample_dbn(7);
    CdConfig config;
    config.cd_steps = 3;
    config.epochs = 42;
    config.minibatch_size = 64;
    config.rng_seed = 99;
    config.shuffle_each_epoch = false;

    SUBCASE("unset learning rate stays unset") {
        nlohmann::json j = dbn_to_json(model, config);
        CdConfig out_config;
        DbnModel back = dbn_from_json(load_json(dump_json(j)), &out_config);

        REQUIRE(back.layers.size() == 2);
        CHECK(back.layers[0].kind == RbmKind::GaussianBernoulli);
        CHECK(back.layers[1].kind == RbmKind::BernoulliBernoulli);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(back.layers[i].weights == model.layers[i].weights);
            CHECK(back.layers[i].visible_bias == model.layers[i].visible_bias);
            CHECK(back.layers[i].hidden_bias == model.layers[i].hidden_bias);
        }
        CHECK(out_config.cd_steps == 3);
        CHECK(out_config.epochs == 42);
        CHECK(out_config.minibatch_size == 64);
        CHECK(out_config.rng_seed == 99);
        CHECK_FALSE(out_config.shuffle_each_epoch);
        CHECK_FALSE(out_config.learning_rate.has_value());
    }

    SUBCASE("explicit learning rate survives") {
        config.learning_rate = 0.05;
        CdConfig out_config;
        dbn_from_json(load_json(dump_json(dbn_to_json(model, config))), &out_config);
        REQUIRE(out_config.learning_rate.has_value());
        CHECK(*out_config.learning_rate == 0.05);
    }
}

TEST_CASE("classifier round trip per model kind") {
    MinMaxScaler scaler;
    scaler.col_min = Eigen::VectorXd::Zero(4);
    scaler.col_max = Eigen::VectorXd::Ones(4);

    SUBCASE("logistic") {
        TrainedClassifier c;
        LogisticModel m;
        m.theta = random_matrix(5, 1, 11).col(0);
        m.ridge_lambda = 1e-4;
        c.model = m;
        c.scaler = scaler;
        c.dbn = sample_dbn(13);
        c.latent_mode = LatentMode::Sample;

        TrainedClassifier back = classifier_from_json(load_json(dump_json(classifier_to_json(c))));
        CHECK(back.kind() == "logreg");
        CHECK(std::get<LogisticModel>(back.model).theta == m.theta);
        CHECK(std::get<LogisticModel>(back.model).ridge_lambda == m.ridge_lambda);
        CHECK(back.latent_mode == LatentMode::Sample);
        CHECK(back.dbn.layers.size() == 2);
        CHECK(back.dbn.layers[0].weights == c.dbn.layers[0].weights);
        CHECK(back.scaler.col_min == scaler.col_min);
    }

    SUBCASE("svm") {
        TrainedClassifier c;
        SvmModel m;
        m.support_vectors = random_matrix(6, 4, 17);
        m.dual_coefficients = random_matrix(6, 1, 19).col(0);
        m.bias = -0.25;
        m.kernel_gamma = 0.05;
        m.cost = 10.0;
        c.model = m;
        c.scaler = scaler;

        TrainedClassifier back = classifier_from_json(load_json(dump_json(classifier_to_json(c))));
        CHECK(back.kind() == "svm");
        const SvmModel& s = std::get<SvmModel>(back.model);
        CHECK(s.support_vectors == m.support_vectors);
        CHECK(s.dual_coefficients == m.dual_coefficients);
        CHECK(s.bias == m.bias);
        CHECK(s.kernel_gamma == m.kernel_gamma);
        CHECK(s.cost == m.cost);
    }

    SUBCASE("neural net") {
        TrainedClassifier c;
        NeuralNet net;
        net.weights = {random_matrix(4, 3, 23), random_matrix(3, 4, 29), random_matrix(4, 1, 31)};
        net.biases = {random_matrix(3, 1, 37).col(0), random_matrix(4, 1, 41).col(0),
                      random_matrix(1, 1, 43).col(0)};
        net.momentum = 0.5;
        net.learning_rate = 0.1;
        c.model = net;
        c.scaler = scaler;

        TrainedClassifier back = classifier_from_json(load_json(dump_json(classifier_to_json(c))));
        CHECK(back.kind() == "nn");
        const NeuralNet& n = std::get<NeuralNet>(back.model);
        REQUIRE(n.weights.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(n.weights[i] == net.weights[i]);
            CHECK(n.biases[i] == net.biases[i]);
        }
    }

    SUBCASE("oracle") {
        TrainedClassifier c;
        c.model = OraclePassthrough{};
        c.scaler = scaler;
        TrainedClassifier back = classifier_from_json(load_json(dump_json(classifier_to_json(c))));
        CHECK(back.kind() == "oracle");
    }
}

TEST_CASE("format version and shape mismatches are rejected") {
    DbnModel model = sample_dbn(3);
    nlohmann::json j = dbn_to_json(model, CdConfig{});

    nlohmann::json wrong_version = j;
    wrong_version["format_version"] = 999;
    CHECK_THROWS_AS(dbn_from_json(wrong_version), FormatError);

    nlohmann::json truncated = j;
    truncated["layers"][0]["weights"][0].erase(0);  // drop one weight entry
    CHECK_THROWS_AS(dbn_from_json(truncated), DataError);
}

TEST_CASE("serialization is deterministic") {
    DbnModel model = sample_dbn(5);
    CdConfig config;
    std::string once = dump_json(dbn_to_json(model, config));
    std::string twice = dump_json(dbn_to_json(model, config));
    CHECK(once == twice);
    // load-then-save reproduces the exact bytes
    DbnModel back = dbn_from_json(load_json(once));
    CHECK(dump_json(dbn_to_json(back, config)) == once);
}
