#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "deepspread/backtest.hpp"
#include "deepspread/date.hpp"
#include "deepspread/market_data.hpp"
#include "deepspread/rbm.hpp"
#include "deepspread/synth.hpp"

namespace deepspread {

/// Flat declarative configuration for the whole pipeline. Every key has a
/// default; a config file supplies overrides and CLI flags override both.
struct PipelineConfig {
    // data
    std::string instrument_a = "ZF";
    std::string instrument_b = "ZN";
    std::string csv_a;
    std::string csv_b;
    ColumnMapping columns;                    // col_* and date_format keys
    std::vector<DateInterval> exclude_ranges;  // the example config ships the 2008 window
    SplitSpec split;

    // features
    std::vector<int> ma_windows = {5, 10};
    int lags = 5;
    int horizon_days = 5;

    // portfolio
    double pc1_variance_threshold = 0.99;
    bool portfolio_use_standardized = false;

    // DBN pretraining
    Eigen::Index dbn_hidden1 = 15;
    Eigen::Index dbn_hidden2 = 20;
    int cd_steps = 1;
    int rbm_epochs = 100;
    int rbm_minibatch = 100;
    double rbm_lr_gaussian = 0.01;
    double rbm_lr_bernoulli = 0.1;
    bool shuffle_each_epoch = true;
    std::string latent_mode = "threshold";  // or "sample"

    // classifier
    std::string classifier = "logreg";  // logreg | svm | nn
    double logreg_lambda = 1e-4;
    // Full-batch ascent on d binary features (plus bias) has curvature bounded by
    // (d+1)/4, so lr must stay below 8/(d+1) even in the fully collinear worst
    // case; 0.1 is safely inside that for the 20-wide latent space.
    double logreg_lr = 0.1;
    int logreg_epochs = 200;
    std::vector<double> svm_c_grid = {0.01, 0.1, 1.0, 10.0, 100.0};
    double svm_gamma = 0.05;  // 1/d for the 20-wide latent space
    int nn_epochs = 100;
    int nn_minibatch = 100;
    double nn_lr = 0.5;
    double nn_momentum = 0.5;

    // strategy
    StrategyConfig strategy;

    // synthetic data generation
    SynthConfig synth;

    // run control
    std::uint64_t seed = 42;
    std::string output_dir = "out";

    /// Throws ValidationError on any out-of-range or inconsistent value
    /// (fail-fast, before any stage runs).
    void validate() const;

    LatentMode latent_mode_enum() const;

    /// Full snapshot of every key (used in the run manifest).
    nlohmann::json to_json() const;

    /// Apply overrides from a flat JSON object. Unknown keys are a
    /// ValidationError.
    void apply_json(const nlohmann::json& j);

    static PipelineConfig from_json(const nlohmann::json& j);
};

}  // namespace deepspread
