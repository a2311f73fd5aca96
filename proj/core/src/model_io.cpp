#include "deepspread/model_io.hpp"

#include <string>
#include <vector>

#include "deepspread/errors.hpp"

namespace deepspread {

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw FormatError("expected a JSON array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw FormatError("expected a JSON array of numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw FormatError("expected a JSON array of rows");
    const auto n_rows = static_cast<Eigen::Index>(j.size());
    if (n_rows == 0) return Eigen::MatrixXd(0, 0);
    if (!j[0].is_array()) throw FormatError("expected a JSON array of rows");
    const auto n_cols = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXd m(n_rows, n_cols);
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols) {
            throw FormatError("matrix rows have inconsistent lengths");
        }
        for (Eigen::Index c = 0; c < n_cols; ++c) {
            const auto& cell = row[static_cast<std::size_t>(c)];
            if (!cell.is_number()) throw FormatError("matrix entries must be numbers");
            m(r, c) = cell.get<double>();
        }
    }
    return m;
}

void check_version(const nlohmann::json& j, const char* what) {
    if (!j.is_object()) throw FormatError(std::string(what) + " JSON must be an object");
    if (!j.contains("format_version") || !j["format_version"].is_number_integer()) {
        throw FormatError(std::string(what) + " JSON is missing format_version");
    }
    if (j["format_version"].get<int>() != kModelFormatVersion) {
        throw FormatError(std::string(what) + " has unsupported format_version " +
                          j["format_version"].dump());
    }
}

const nlohmann::json& require(const nlohmann::json& j, const char* key, const char* what) {
    if (!j.contains(key)) {
        throw FormatError(std::string(what) + " JSON is missing the \"" + key + "\" key");
    }
    return j.at(key);
}

std::string rbm_kind_name(RbmKind kind) {
    return kind == RbmKind::GaussianBernoulli ? "gaussian-bernoulli" : "bernoulli-bernoulli";
}

RbmKind rbm_kind_from_name(const std::string& name) {
    if (name == "gaussian-bernoulli") return RbmKind::GaussianBernoulli;
    if (name == "bernoulli-bernoulli") return RbmKind::BernoulliBernoulli;
    throw FormatError("unknown RBM kind \"" + name + "\"");
}

nlohmann::json layer_to_json(const RbmLayer& layer) {
    return nlohmann::json{{"kind", rbm_kind_name(layer.kind)},
                          {"weights", matrix_to_json(layer.weights)},
                          {"visible_bias", vector_to_json(layer.visible_bias)},
                          {"hidden_bias", vector_to_json(layer.hidden_bias)}};
}

RbmLayer layer_from_json(const nlohmann::json& j) {
    RbmLayer layer;
    layer.kind = rbm_kind_from_name(require(j, "kind", "RBM layer").get<std::string>());
    layer.weights = matrix_from_json(require(j, "weights", "RBM layer"));
    layer.visible_bias = vector_from_json(require(j, "visible_bias", "RBM layer"));
    layer.hidden_bias = vector_from_json(require(j, "hidden_bias", "RBM layer"));
    if (layer.visible_bias.size() != layer.weights.rows() ||
        layer.hidden_bias.size() != layer.weights.cols()) {
        throw FormatError("RBM layer bias sizes do not match the weight matrix");
    }
    return layer;
}

}  // namespace

nlohmann::json scaler_to_json(const MinMaxScaler& scaler) {
    return nlohmann::json{{"format_version", kModelFormatVersion},
                          {"col_min", vector_to_json(scaler.col_min)},
                          {"col_max", vector_to_json(scaler.col_max)}};
}

MinMaxScaler scaler_from_json(const nlohmann::json& j) {
    check_version(j, "scaler");
    MinMaxScaler scaler;
    scaler.col_min = vector_from_json(require(j, "col_min", "scaler"));
    scaler.col_max = vector_from_json(require(j, "col_max", "scaler"));
    if (scaler.col_min.size() != scaler.col_max.size()) {
        throw FormatError("scaler min/max lengths differ");
    }
    return scaler;
}

nlohmann::json dbn_to_json(const DbnModel& model, const CdConfig& config) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : model.layers) layers.push_back(layer_to_json(layer));
    nlohmann::json training{{"cd_steps", config.cd_steps},
                            {"epochs", config.epochs},
                            {"minibatch_size", config.minibatch_size},
                            {"rng_seed", config.rng_seed},
                            {"shuffle_each_epoch", config.shuffle_each_epoch}};
    if (config.learning_rate) {
        training["learning_rate"] = *config.learning_rate;
    } else {
        training["learning_rate"] = nullptr;
    }
    return nlohmann::json{
        {"format_version", kModelFormatVersion}, {"layers", layers}, {"training", training}};
}

DbnModel dbn_from_json(const nlohmann::json& j, CdConfig* config_out) {
    check_version(j, "DBN");
    DbnModel model;
    const auto& layers = require(j, "layers", "DBN");
    if (!layers.is_array() || layers.empty()) {
        throw FormatError("DBN JSON needs a non-empty layers array");
    }
    for (const auto& layer : layers) {
        model.layers.push_back(layer_from_json(layer));
    }
    for (std::size_t i = 1; i < model.layers.size(); ++i) {
        if (model.layers[i].n_visible() != model.layers[i - 1].n_hidden()) {
            throw FormatError("DBN layer sizes do not chain");
        }
    }
    if (config_out != nullptr) {
        const auto& training = require(j, "training", "DBN");
        CdConfig config;
        config.cd_steps = require(training, "cd_steps", "DBN training").get<int>();
        config.epochs = require(training, "epochs", "DBN training").get<int>();
        config.minibatch_size = require(training, "minibatch_size", "DBN training").get<int>();
        config.rng_seed = require(training, "rng_seed", "DBN training").get<std::uint64_t>();
        config.shuffle_each_epoch =
            require(training, "shuffle_each_epoch", "DBN training").get<bool>();
        const auto& lr = require(training, "learning_rate", "DBN training");
        if (!lr.is_null()) config.learning_rate = lr.get<double>();
        *config_out = config;
    }
    return model;
}

namespace {

nlohmann::json model_to_json(const LogisticModel& m) {
    return nlohmann::json{{"type", "logreg"},
                          {"theta", vector_to_json(m.theta)},
                          {"ridge_lambda", m.ridge_lambda}};
}

nlohmann::json model_to_json(const SvmModel& m) {
    return nlohmann::json{{"type", "svm"},
                          {"support_vectors", matrix_to_json(m.support_vectors)},
                          {"dual_coefficients", vector_to_json(m.dual_coefficients)},
                          {"bias", m.bias},
                          {"kernel_gamma", m.kernel_gamma},
                          {"cost", m.cost}};
}

nlohmann::json model_to_json(const NeuralNet& m) {
    nlohmann::json weights = nlohmann::json::array();
    nlohmann::json biases = nlohmann::json::array();
    for (const auto& w : m.weights) weights.push_back(matrix_to_json(w));
    for (const auto& b : m.biases) biases.push_back(vector_to_json(b));
    return nlohmann::json{{"type", "nn"},
                          {"weights", weights},
                          {"biases", biases},
                          {"momentum", m.momentum},
                          {"learning_rate", m.learning_rate}};
}

nlohmann::json model_to_json(const OraclePassthrough&) {
    return nlohmann::json{{"type", "oracle"}};
}

ClassifierModel classifier_model_from_json(const nlohmann::json& j) {
    const std::string type = require(j, "type", "classifier model").get<std::string>();
    if (type == "logreg") {
        LogisticModel m;
        m.theta = vector_from_json(require(j, "theta", "logreg"));
        m.ridge_lambda = require(j, "ridge_lambda", "logreg").get<double>();
        return m;
    }
    if (type == "svm") {
        SvmModel m;
        m.support_vectors = matrix_from_json(require(j, "support_vectors", "svm"));
        m.dual_coefficients = vector_from_json(require(j, "dual_coefficients", "svm"));
        m.bias = require(j, "bias", "svm").get<double>();
        m.kernel_gamma = require(j, "kernel_gamma", "svm").get<double>();
        m.cost = require(j, "cost", "svm").get<double>();
        if (m.support_vectors.rows() != m.dual_coefficients.size()) {
            throw FormatError("SVM support vector and coefficient counts differ");
        }
        return m;
    }
    if (type == "nn") {
        NeuralNet m;
        const auto& weights = require(j, "weights", "nn");
        const auto& biases = require(j, "biases", "nn");
        if (!weights.is_array() || !biases.is_array() || weights.size() != biases.size()) {
            throw FormatError("nn weights/biases must be arrays of equal length");
        }
        for (const auto& w : weights) m.weights.push_back(matrix_from_json(w));
        for (const auto& b : biases) m.biases.push_back(vector_from_json(b));
        m.momentum = require(j, "momentum", "nn").get<double>();
        m.learning_rate = require(j, "learning_rate", "nn").get<double>();
        return m;
    }
    if (type == "oracle") {
        return OraclePassthrough{};
    }
    throw FormatError("unknown classifier type \"" + type + "\"");
}

}  // namespace

nlohmann::json classifier_to_json(const TrainedClassifier& classifier) {
    nlohmann::json dbn_layers = nlohmann::json::array();
    for (const auto& layer : classifier.dbn.layers) dbn_layers.push_back(layer_to_json(layer));
    return nlohmann::json{
        {"format_version", kModelFormatVersion},
        {"model", std::visit([](const auto& m) { return model_to_json(m); }, classifier.model)},
        {"scaler", scaler_to_json(classifier.scaler)},
        {"dbn_layers", dbn_layers},
        {"latent_mode", classifier.latent_mode == LatentMode::Threshold ? "threshold" : "sample"}};
}

TrainedClassifier classifier_from_json(const nlohmann::json& j) {
    check_version(j, "classifier");
    TrainedClassifier classifier;
    classifier.model = classifier_model_from_json(require(j, "model", "classifier"));
    classifier.scaler = scaler_from_json(require(j, "scaler", "classifier"));
    const auto& dbn_layers = require(j, "dbn_layers", "classifier");
    if (!dbn_layers.is_array()) throw FormatError("dbn_layers must be an array");
    for (const auto& layer : dbn_layers) {
        classifier.dbn.layers.push_back(layer_from_json(layer));
    }
    const std::string mode = require(j, "latent_mode", "classifier").get<std::string>();
    if (mode == "threshold") {
        classifier.latent_mode = LatentMode::Threshold;
    } else if (mode == "sample") {
        classifier.latent_mode = LatentMode::Sample;
    } else {
        throw FormatError("unknown latent mode \"" + mode + "\"");
    }
    return classifier;
}

std::string dump_json(const nlohmann::json& j) {
    return j.dump(2) + "\n";
}

nlohmann::json load_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        throw FormatError("malformed JSON");
    }
    return j;
}

}  // namespace deepspread
