// Command-line front end: one subcommand per pipeline stage plus the full
// run. A JSON config file supplies settings; flags override config keys.
// Exit codes: 0 success, 2 validation error, 3 data error, 4 numeric error.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "deepspread/config.hpp"
#include "deepspread/errors.hpp"
#include "deepspread/model_io.hpp"
#include "deepspread/pipeline.hpp"
#include "deepspread/version.hpp"

namespace ds = deepspread;

namespace {

struct CliOverrides {
    std::string config_path;
    std::optional<std::string> output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> csv_a, csv_b;
    std::optional<std::string> classifier;
    std::optional<int> epochs;
    std::optional<double> lr, lambda, momentum, gamma;
    std::optional<std::vector<double>> c_grid;
    std::optional<int> days;
    std::optional<double> variance_threshold;
    std::optional<bool> standardized_portfolio;
    std::optional<int> horizon, lags;
    std::optional<int> rbm_epochs, rbm_minibatch, cd_steps;
    std::optional<int> size_a, size_b;
    std::optional<double> transaction_cost;
    std::optional<bool> invert_signal;
    std::optional<std::vector<std::string>> exclude_ranges;
};

ds::PipelineConfig build_config(const CliOverrides& o) {
    ds::PipelineConfig config;
    if (!o.config_path.empty()) {
        config.apply_json(ds::load_json(ds::read_text_file(o.config_path)));
    }
    if (o.output_dir) config.output_dir = *o.output_dir;
    if (o.seed) config.seed = *o.seed;
    if (o.csv_a) config.csv_a = *o.csv_a;
    if (o.csv_b) config.csv_b = *o.csv_b;
    if (o.classifier) config.classifier = *o.classifier;
    if (o.epochs) {
        if (config.classifier == "logreg") config.logreg_epochs = *o.epochs;
        if (config.classifier == "nn") config.nn_epochs = *o.epochs;
    }
    if (o.lr) {
        if (config.classifier == "logreg") config.logreg_lr = *o.lr;
        if (config.classifier == "nn") config.nn_lr = *o.lr;
    }
    if (o.lambda) config.logreg_lambda = *o.lambda;
    if (o.momentum) config.nn_momentum = *o.momentum;
    if (o.gamma) config.svm_gamma = *o.gamma;
    if (o.c_grid) config.svm_c_grid = *o.c_grid;
    if (o.days) config.synth.days = *o.days;
    if (o.variance_threshold) config.pc1_variance_threshold = *o.variance_threshold;
    if (o.standardized_portfolio) config.portfolio_use_standardized = *o.standardized_portfolio;
    if (o.horizon) {
        config.horizon_days = *o.horizon;
        config.strategy.horizon_days = *o.horizon;
    }
    if (o.lags) config.lags = *o.lags;
    if (o.rbm_epochs) config.rbm_epochs = *o.rbm_epochs;
    if (o.rbm_minibatch) config.rbm_minibatch = *o.rbm_minibatch;
    if (o.cd_steps) config.cd_steps = *o.cd_steps;
    if (o.size_a) config.strategy.size_a = *o.size_a;
    if (o.size_b) config.strategy.size_b = *o.size_b;
    if (o.transaction_cost) config.strategy.transaction_cost_per_contract = *o.transaction_cost;
    if (o.invert_signal) config.strategy.invert_signal = *o.invert_signal;
    if (o.exclude_ranges) {
        config.exclude_ranges.clear();
        for (const auto& text : *o.exclude_ranges) {
            try {
                config.exclude_ranges.push_back(ds::DateInterval::parse(text));
            } catch (const ds::FormatError& e) {
                throw ds::ValidationError(std::string("--exclude: ") + e.what());
            }
        }
    }
    config.validate();
    return config;
}

const char* opt(const std::optional<double>& v, char* buf, std::size_t n) {
    if (!v) return "undefined";
    std::snprintf(buf, n, "%.4f", *v);
    return buf;
}

void print_rates(const ds::SplitMetrics& m) {
    char b1[32], b2[32], b3[32], b4[32];
    std::printf("  %-5s  acc %.4f  auc %.4f  recall +/-: %s / %s  precision +/-: %s / %s\n",
                m.split.c_str(), m.counts.accuracy(), m.auc, opt(m.rates.recall_up, b1, 32),
                opt(m.rates.recall_down, b2, 32), opt(m.rates.precision_up, b3, 32),
                opt(m.rates.precision_down, b4, 32));
}

void print_summary(const char* label, const ds::BacktestSummary& s) {
    std::printf("  %-9s total pnl %12.2f  max drawdown %12.2f  hit rate %.4f  positions %zu\n",
                label, s.total_pnl, s.max_drawdown, s.hit_rate, s.position_count);
}

int dispatch(const std::string& command, CliOverrides& overrides) {
    ds::PipelineConfig config = build_config(overrides);

    if (command == "synth") {
        auto [path_a, path_b] = ds::run_synth(config);
        std::printf("synthetic pair written:\n  %s\n  %s\n", path_a.c_str(), path_b.c_str());
        return 0;
    }
    if (command == "ingest") {
        const ds::IngestResult r = ds::run_ingest(config);
        std::printf("parsed %zu + %zu rows (excluded in parse: %zu + %zu)\n", r.parsed_a,
                    r.parsed_b, r.excluded_parse_a, r.excluded_parse_b);
        std::printf("cleaning: range-excluded %zu + %zu, invalid %zu + %zu\n", r.excluded_range_a,
                    r.excluded_range_b, r.invalid_a, r.invalid_b);
        std::printf("aligned rows: %zu\n", r.pair.size());
        if (!r.warning.empty()) std::fprintf(stderr, "warning: %s\n", r.warning.c_str());
        return 0;
    }
    if (command == "portfolio") {
        const ds::PortfolioResult r = ds::run_portfolio(config);
        std::printf("train loadings (rows = components):\n");
        for (int row = 0; row < 2; ++row) {
            std::printf("  PC%d: [%10.6f, %10.6f]  explained %.6f\n", row + 1,
                        r.pca_train.loadings(row, 0), r.pca_train.loadings(row, 1),
                        r.pca_train.explained_variance_ratio(row));
        }
        std::printf("variance check (PC1 >= %.4f): %s\n", r.variance_check.threshold,
                    r.variance_check.passed ? "passed" : "FAILED");
        if (!r.variance_check.passed) {
            std::fprintf(stderr, "warning: first component explains only %.6f of the variance\n",
                         r.variance_check.ratio_first);
        }
        std::printf("portfolio series: %zu rows\n", r.series.prices.size());
        return 0;
    }
    if (command == "features") {
        const ds::FeaturesResult r = ds::run_features(config);
        std::printf("datasets: train %td rows, val %td rows, test %td rows, %td columns\n",
                    r.train.features.n_rows(), r.val.features.n_rows(), r.test.features.n_rows(),
                    r.train.features.n_cols());
        return 0;
    }
    if (command == "pretrain") {
        const ds::PretrainResult r = ds::run_pretrain(config);
        for (std::size_t i = 0; i < r.traces.size(); ++i) {
            const auto& trace = r.traces[i];
            if (trace.train_mse.empty()) {
                std::printf("layer %zu: untrained (0 epochs)\n", i + 1);
                continue;
            }
            std::printf("layer %zu: train MSE %.6f -> %.6f over %zu epochs\n", i + 1,
                        trace.train_mse.front(), trace.train_mse.back(), trace.train_mse.size());
        }
        return 0;
    }
    if (command == "train") {
        const ds::TrainResult r = ds::run_train(config);
        std::printf("trained classifier: %s\n", r.classifier.kind().c_str());
        if (config.classifier == "svm") {
            std::printf("selected cost C = %g (validation mean recall)\n", r.selected_cost);
        }
        if (config.classifier == "nn" && !r.nn_mse_trace.empty()) {
            std::printf("train MSE %.6f -> %.6f over %zu epochs\n", r.nn_mse_trace.front(),
                        r.nn_mse_trace.back(), r.nn_mse_trace.size());
        }
        return 0;
    }
    if (command == "evaluate") {
        const ds::EvaluateResult r = ds::run_evaluate(config);
        std::printf("metrics (positive class = up):\n");
        for (const auto& split : r.splits) print_rates(split);
        return 0;
    }
    if (command == "backtest") {
        const ds::BacktestResult r = ds::run_backtest(config);
        std::printf("backtest over %zu trading days:\n", r.ledger.dates.size());
        print_summary("model", r.summary);
        print_summary("random", r.random_summary);
        return 0;
    }
    if (command == "pipeline") {
        // Convenience: generate the synthetic pair when no input files are
        // configured (or the configured ones are absent).
        const bool need_a = config.csv_a.empty() || !std::filesystem::exists(config.csv_a);
        const bool need_b = config.csv_b.empty() || !std::filesystem::exists(config.csv_b);
        if (need_a || need_b) {
            auto [path_a, path_b] = ds::run_synth(config);
            config.csv_a = path_a;
            config.csv_b = path_b;
            std::printf("inputs missing; synthesized %s, %s\n", path_a.c_str(), path_b.c_str());
        }
        const ds::RunManifest manifest = ds::run_pipeline(config);
        std::printf("pipeline complete: %zu artifacts under %s (manifest.json written)\n",
                    manifest.file_digests.size(), config.output_dir.c_str());
        return 0;
    }
    throw ds::ValidationError("unknown command " + command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PCA spread portfolio + DBN feature learning + direction classifiers"};
    app.set_version_flag("--version", ds::kVersion);
    app.require_subcommand(1);

    CliOverrides o;
    app.add_option("-c,--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("-o,--output-dir", o.output_dir, "artifact directory (default: out)");
    app.add_option("--seed", o.seed, "global RNG seed");

    auto* synth = app.add_subcommand("synth", "generate a synthetic cointegrated pair");
    synth->add_option("--days", o.days, "trading days to generate");
    synth->add_option("--csv-a", o.csv_a, "output path for leg a");
    synth->add_option("--csv-b", o.csv_b, "output path for leg b");

    auto* ingest = app.add_subcommand("ingest", "parse, clean and align the two CSVs");
    ingest->add_option("--csv-a", o.csv_a, "input CSV for leg a");
    ingest->add_option("--csv-b", o.csv_b, "input CSV for leg b");
    ingest->add_option("--exclude", o.exclude_ranges,
                       "date ranges to drop (YYYY-MM-DD..YYYY-MM-DD, repeatable)");

    auto* portfolio = app.add_subcommand("portfolio", "standardize, run PCA, emit the PC2 portfolio");
    portfolio->add_option("--variance-threshold", o.variance_threshold,
                          "required PC1 explained-variance ratio");
    portfolio->add_flag("--standardized-portfolio", [&o](std::int64_t) {
        o.standardized_portfolio = true;
    }, "weight standardized instead of raw prices");

    auto* features = app.add_subcommand("features", "build lagged trend features and labels");
    features->add_option("--horizon", o.horizon, "label/holding horizon in days");
    features->add_option("--lags", o.lags, "lags per moving-average window");

    auto* pretrain = app.add_subcommand("pretrain", "greedy layerwise DBN pretraining");
    pretrain->add_option("--epochs", o.rbm_epochs, "epochs per RBM layer");
    pretrain->add_option("--minibatch", o.rbm_minibatch, "minibatch size");
    pretrain->add_option("--cd-steps", o.cd_steps, "Gibbs steps per CD update");

    auto* train = app.add_subcommand("train", "train the direction classifier");
    train->add_option("--classifier", o.classifier, "logreg | svm | nn");
    train->add_option("--epochs", o.epochs, "training epochs (logreg / nn)");
    train->add_option("--lr", o.lr, "learning rate (logreg / nn)");
    train->add_option("--lambda", o.lambda, "ridge penalty (logreg)");
    train->add_option("--momentum", o.momentum, "momentum (nn)");
    train->add_option("--C-grid", o.c_grid, "candidate costs (svm)");
    train->add_option("--gamma", o.gamma, "RBF kernel width (svm)");

    app.add_subcommand("evaluate", "confusion counts, precision/recall, ROC per split");

    auto* backtest = app.add_subcommand("backtest", "simulate the hedged strategy on the test split");
    backtest->add_option("--size-a", o.size_a, "contracts of leg a per entry");
    backtest->add_option("--size-b", o.size_b, "contracts of leg b per entry");
    backtest->add_option("--cost", o.transaction_cost, "transaction cost per contract per side");
    backtest->add_flag("--no-invert-signal", [&o](std::int64_t) { o.invert_signal = false; },
                       "ride the predicted direction instead of fading it");

    auto* pipeline = app.add_subcommand("pipeline", "run every stage in order and write the manifest");
    pipeline->add_option("--classifier", o.classifier, "logreg | svm | nn");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return dispatch(app.get_subcommands().front()->get_name(), o);
    } catch (const ds::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ds::DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ds::NumericError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
