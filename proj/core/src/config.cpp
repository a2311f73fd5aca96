#include "deepspread/config.hpp"

#include <algorithm>

#include "deepspread/errors.hpp"

namespace deepspread {

void PipelineConfig::validate() const {
    split.validate();
    if (ma_windows.empty()) throw ValidationError("ma_windows must not be empty");
    for (int w : ma_windows) {
        if (w < 1) throw ValidationError("ma_windows entries must be >= 1");
    }
    if (lags < 1) throw ValidationError("lags must be >= 1");
    if (horizon_days < 1) throw ValidationError("horizon_days must be >= 1");
    if (!(pc1_variance_threshold > 0.0 && pc1_variance_threshold <= 1.0)) {
        throw ValidationError("pc1_variance_threshold must lie in (0,1]");
    }
    if (dbn_hidden1 < 1 || dbn_hidden2 < 1) throw ValidationError("DBN sizes must be >= 1");
    if (cd_steps < 1) throw ValidationError("cd_steps must be >= 1");
    if (rbm_epochs < 0) throw ValidationError("rbm_epochs must be >= 0");
    if (rbm_minibatch < 1) throw ValidationError("rbm_minibatch must be >= 1");
    if (!(rbm_lr_gaussian > 0.0) || !(rbm_lr_bernoulli > 0.0)) {
        throw ValidationError("RBM learning rates must be positive");
    }
    if (latent_mode != "threshold" && latent_mode != "sample") {
        throw ValidationError("latent_mode must be \"threshold\" or \"sample\"");
    }
    if (classifier != "logreg" && classifier != "svm" && classifier != "nn") {
        throw ValidationError("classifier must be \"logreg\", \"svm\" or \"nn\"");
    }
    if (logreg_lambda < 0.0) throw ValidationError("logreg_lambda must be >= 0");
    if (!(logreg_lr > 0.0)) throw ValidationError("logreg_lr must be positive");
    if (logreg_epochs < 1) throw ValidationError("logreg_epochs must be >= 1");
    if (svm_c_grid.empty()) throw ValidationError("svm_c_grid must not be empty");
    for (double c : svm_c_grid) {
        if (!(c > 0.0)) throw ValidationError("svm_c_grid entries must be positive");
    }
    if (!(svm_gamma > 0.0)) throw ValidationError("svm_gamma must be positive");
    if (nn_epochs < 1) throw ValidationError("nn_epochs must be >= 1");
    if (nn_minibatch < 1) throw ValidationError("nn_minibatch must be >= 1");
    if (!(nn_lr > 0.0)) throw ValidationError("nn_lr must be positive");
    if (nn_momentum < 0.0 || nn_momentum >= 1.0) {
        throw ValidationError("nn_momentum must lie in [0,1)");
    }
    strategy.validate();
    synth.validate();
    if (output_dir.empty()) throw ValidationError("output_dir must not be empty");
}

LatentMode PipelineConfig::latent_mode_enum() const {
    return latent_mode == "sample" ? LatentMode::Sample : LatentMode::Threshold;
}

nlohmann::json PipelineConfig::to_json() const {
    nlohmann::json exclude = nlohmann::json::array();
    for (const auto& range : exclude_ranges) {
        exclude.push_back(range.first.to_string() + ".." + range.last.to_string());
    }
    return nlohmann::json{
        {"instrument_a", instrument_a},
        {"instrument_b", instrument_b},
        {"csv_a", csv_a},
        {"csv_b", csv_b},
        {"col_date", columns.date},
        {"col_open", columns.open},
        {"col_high", columns.high},
        {"col_low", columns.low},
        {"col_close", columns.close},
        {"col_close_fallback", columns.close_fallback},
        {"col_volume", columns.volume},
        {"col_open_interest", columns.open_interest},
        {"date_format", columns.date_format},
        {"exclude_ranges", exclude},
        {"train_frac", split.train_frac},
        {"val_frac", split.val_frac},
        {"test_frac", split.test_frac},
        {"ma_windows", ma_windows},
        {"lags", lags},
        {"horizon_days", horizon_days},
        {"pc1_variance_threshold", pc1_variance_threshold},
        {"portfolio_use_standardized", portfolio_use_standardized},
        {"dbn_hidden1", dbn_hidden1},
        {"dbn_hidden2", dbn_hidden2},
        {"cd_steps", cd_steps},
        {"rbm_epochs", rbm_epochs},
        {"rbm_minibatch", rbm_minibatch},
        {"rbm_lr_gaussian", rbm_lr_gaussian},
        {"rbm_lr_bernoulli", rbm_lr_bernoulli},
        {"shuffle_each_epoch", shuffle_each_epoch},
        {"latent_mode", latent_mode},
        {"classifier", classifier},
        {"logreg_lambda", logreg_lambda},
        {"logreg_lr", logreg_lr},
        {"logreg_epochs", logreg_epochs},
        {"svm_c_grid", svm_c_grid},
        {"svm_gamma", svm_gamma},
        {"nn_epochs", nn_epochs},
        {"nn_minibatch", nn_minibatch},
        {"nn_lr", nn_lr},
        {"nn_momentum", nn_momentum},
        {"size_a", strategy.size_a},
        {"size_b", strategy.size_b},
        {"point_value_a", strategy.point_value_a},
        {"point_value_b", strategy.point_value_b},
        {"invert_signal", strategy.invert_signal},
        {"transaction_cost_per_contract", strategy.transaction_cost_per_contract},
        {"synth_days", synth.days},
        {"synth_start_date", synth.start_date.to_string()},
        {"synth_base_a", synth.base_a},
        {"synth_base_b", synth.base_b},
        {"synth_beta_a", synth.beta_a},
        {"synth_beta_b", synth.beta_b},
        {"synth_factor_vol", synth.factor_vol},
        {"synth_noise_vol", synth.noise_vol},
        {"synth_noise_rho", synth.noise_rho},
        {"synth_oc_spread_vol", synth.oc_spread_vol},
        {"synth_hl_pad_vol", synth.hl_pad_vol},
        {"synth_seed", synth.seed},
        {"seed", seed},
        {"output_dir", output_dir},
    };
}

namespace {

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
    try {
        j.at(key).get_to(out);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config key \"") + key + "\": " + e.what());
    }
}

}  // namespace

void PipelineConfig::apply_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ValidationError("config must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "instrument_a") read_key(j, "instrument_a", instrument_a);
        else if (key == "instrument_b") read_key(j, "instrument_b", instrument_b);
        else if (key == "csv_a") read_key(j, "csv_a", csv_a);
        else if (key == "csv_b") read_key(j, "csv_b", csv_b);
        else if (key == "col_date") read_key(j, "col_date", columns.date);
        else if (key == "col_open") read_key(j, "col_open", columns.open);
        else if (key == "col_high") read_key(j, "col_high", columns.high);
        else if (key == "col_low") read_key(j, "col_low", columns.low);
        else if (key == "col_close") read_key(j, "col_close", columns.close);
        else if (key == "col_close_fallback") read_key(j, "col_close_fallback", columns.close_fallback);
        else if (key == "col_volume") read_key(j, "col_volume", columns.volume);
        else if (key == "col_open_interest") read_key(j, "col_open_interest", columns.open_interest);
        else if (key == "date_format") read_key(j, "date_format", columns.date_format);
        else if (key == "exclude_ranges") {
            if (!value.is_array()) throw ValidationError("exclude_ranges must be an array");
            exclude_ranges.clear();
            for (const auto& item : value) {
                if (!item.is_string()) {
                    throw ValidationError("exclude_ranges entries must be strings");
                }
                try {
                    exclude_ranges.push_back(DateInterval::parse(item.get<std::string>()));
                } catch (const FormatError& e) {
                    throw ValidationError(std::string("exclude_ranges: ") + e.what());
                }
            }
        }
        else if (key == "train_frac") read_key(j, "train_frac", split.train_frac);
        else if (key == "val_frac") read_key(j, "val_frac", split.val_frac);
        else if (key == "test_frac") read_key(j, "test_frac", split.test_frac);
        else if (key == "ma_windows") read_key(j, "ma_windows", ma_windows);
        else if (key == "lags") read_key(j, "lags", lags);
        else if (key == "horizon_days") {
            read_key(j, "horizon_days", horizon_days);
            strategy.horizon_days = horizon_days;
        }
        else if (key == "pc1_variance_threshold") read_key(j, "pc1_variance_threshold", pc1_variance_threshold);
        else if (key == "portfolio_use_standardized") read_key(j, "portfolio_use_standardized", portfolio_use_standardized);
        else if (key == "dbn_hidden1") read_key(j, "dbn_hidden1", dbn_hidden1);
        else if (key == "dbn_hidden2") read_key(j, "dbn_hidden2", dbn_hidden2);
        else if (key == "cd_steps") read_key(j, "cd_steps", cd_steps);
        else if (key == "rbm_epochs") read_key(j, "rbm_epochs", rbm_epochs);
        else if (key == "rbm_minibatch") read_key(j, "rbm_minibatch", rbm_minibatch);
        else if (key == "rbm_lr_gaussian") read_key(j, "rbm_lr_gaussian", rbm_lr_gaussian);
        else if (key == "rbm_lr_bernoulli") read_key(j, "rbm_lr_bernoulli", rbm_lr_bernoulli);
        else if (key == "shuffle_each_epoch") read_key(j, "shuffle_each_epoch", shuffle_each_epoch);
        else if (key == "latent_mode") read_key(j, "latent_mode", latent_mode);
        else if (key == "classifier") read_key(j, "classifier", classifier);
        else if (key == "logreg_lambda") read_key(j, "logreg_lambda", logreg_lambda);
        else if (key == "logreg_lr") read_key(j, "logreg_lr", logreg_lr);
        else if (key == "logreg_epochs") read_key(j, "logreg_epochs", logreg_epochs);
        else if (key == "svm_c_grid") read_key(j, "svm_c_grid", svm_c_grid);
        else if (key == "svm_gamma") read_key(j, "svm_gamma", svm_gamma);
        else if (key == "nn_epochs") read_key(j, "nn_epochs", nn_epochs);
        else if (key == "nn_minibatch") read_key(j, "nn_minibatch", nn_minibatch);
        else if (key == "nn_lr") read_key(j, "nn_lr", nn_lr);
        else if (key == "nn_momentum") read_key(j, "nn_momentum", nn_momentum);
        else if (key == "size_a") read_key(j, "size_a", strategy.size_a);
        else if (key == "size_b") read_key(j, "size_b", strategy.size_b);
        else if (key == "point_value_a") read_key(j, "point_value_a", strategy.point_value_a);
        else if (key == "point_value_b") read_key(j, "point_value_b", strategy.point_value_b);
        else if (key == "invert_signal") read_key(j, "invert_signal", strategy.invert_signal);
        else if (key == "transaction_cost_per_contract") read_key(j, "transaction_cost_per_contract", strategy.transaction_cost_per_contract);
        else if (key == "synth_days") read_key(j, "synth_days", synth.days);
        else if (key == "synth_start_date") {
            std::string text;
            read_key(j, "synth_start_date", text);
            try {
                synth.start_date = Date::parse(text);
            } catch (const FormatError& e) {
                throw ValidationError(std::string("synth_start_date: ") + e.what());
            }
        }
        else if (key == "synth_base_a") read_key(j, "synth_base_a", synth.base_a);
        else if (key == "synth_base_b") read_key(j, "synth_base_b", synth.base_b);
        else if (key == "synth_beta_a") read_key(j, "synth_beta_a", synth.beta_a);
        else if (key == "synth_beta_b") read_key(j, "synth_beta_b", synth.beta_b);
        else if (key == "synth_factor_vol") read_key(j, "synth_factor_vol", synth.factor_vol);
        else if (key == "synth_noise_vol") read_key(j, "synth_noise_vol", synth.noise_vol);
        else if (key == "synth_noise_rho") read_key(j, "synth_noise_rho", synth.noise_rho);
        else if (key == "synth_oc_spread_vol") read_key(j, "synth_oc_spread_vol", synth.oc_spread_vol);
        else if (key == "synth_hl_pad_vol") read_key(j, "synth_hl_pad_vol", synth.hl_pad_vol);
        else if (key == "synth_seed") read_key(j, "synth_seed", synth.seed);
        else if (key == "seed") read_key(j, "seed", seed);
        else if (key == "output_dir") read_key(j, "output_dir", output_dir);
        else {
            throw ValidationError("unknown config key \"" + key + "\"");
        }
    }
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
    PipelineConfig config;
    config.apply_json(j);
    config.validate();
    return config;
}

}  // namespace deepspread
