#include "deepspread/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "deepspread/csv.hpp"
#include "deepspread/errors.hpp"
#include "deepspread/model_io.hpp"
#include "deepspread/rng.hpp"
#include "deepspread/synth.hpp"
#include "deepspread/version.hpp"

namespace deepspread {

namespace fs = std::filesystem;

void StageFiles::merge(const StageFiles& other) {
    for (const auto& path : other.files) {
        if (std::find(files.begin(), files.end(), path) == files.end()) {
            files.push_back(path);
        }
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) {
        throw DataError("cannot read file: " + path);
    }
    std::ostringstream out;
    out << stream.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    const fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
        if (ec) {
            throw DataError("cannot create directory " + p.parent_path().string() + ": " +
                            ec.message());
        }
    }
    std::ofstream stream(path, std::ios::binary | std::ios::trunc);
    if (!stream) {
        throw DataError("cannot write file: " + path);
    }
    stream << content;
    if (!stream) {
        throw DataError("write failed: " + path);
    }
}

namespace {

std::string join(const std::string& dir, const std::string& rel) {
    return (fs::path(dir) / rel).string();
}

// --- shared artifact names -------------------------------------------------

constexpr const char* kAlignedCsv = "data/aligned.csv";
constexpr const char* kIngestReport = "reports/ingest.json";
constexpr const char* kPortfolioCsv = "data/portfolio.csv";
constexpr const char* kPcaReport = "reports/pca.json";
constexpr const char* kScalerJson = "models/scaler.json";
constexpr const char* kDbnJson = "models/dbn.json";
constexpr const char* kClassifierJson = "models/classifier.json";
constexpr const char* kMetricsReport = "reports/metrics.json";
constexpr const char* kSvmSelection = "reports/svm_selection.json";
constexpr const char* kNnTrace = "traces/nn_mse.csv";
constexpr const char* kBacktestReport = "reports/backtest.json";
constexpr const char* kPnlCsv = "data/pnl.csv";
constexpr const char* kPositionsCsv = "reports/positions.csv";

std::string dataset_csv_name(const std::string& split) {
    return "data/features_" + split + ".csv";
}

std::string rbm_trace_name(std::size_t layer) {
    return "traces/rbm_layer" + std::to_string(layer + 1) + ".csv";
}

std::string roc_csv_name(const std::string& split) {
    return "reports/roc_" + split + ".csv";
}

AlignedPair load_aligned(const PipelineConfig& config) {
    return parse_aligned_csv(read_text_file(join(config.output_dir, kAlignedCsv)));
}

PcaResult pca_from_report(const nlohmann::json& split) {
    PcaResult result;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            result.loadings(r, c) = split.at("loadings").at(r).at(c).get<double>();
        }
        result.explained_variance_ratio(r) =
            split.at("explained_variance_ratio").at(r).get<double>();
    }
    return result;
}

nlohmann::json pca_to_report(const PcaResult& result) {
    return nlohmann::json{
        {"loadings",
         {{result.loadings(0, 0), result.loadings(0, 1)},
          {result.loadings(1, 0), result.loadings(1, 1)}}},
        {"explained_variance_ratio",
         {result.explained_variance_ratio(0), result.explained_variance_ratio(1)}}};
}

struct PortfolioArtifacts {
    Standardizer standardizer;
    PcaResult pca_train;
    PortfolioSeries series;
};

PortfolioArtifacts load_portfolio(const PipelineConfig& config) {
    PortfolioArtifacts artifacts;
    const nlohmann::json report =
        load_json(read_text_file(join(config.output_dir, kPcaReport)));
    const auto& stats = report.at("standardizer");
    artifacts.standardizer.mean_a = stats.at("mean_a").get<double>();
    artifacts.standardizer.mean_b = stats.at("mean_b").get<double>();
    artifacts.standardizer.std_a = stats.at("std_a").get<double>();
    artifacts.standardizer.std_b = stats.at("std_b").get<double>();
    artifacts.pca_train = pca_from_report(report.at("splits").at("train"));

    const std::string csv = read_text_file(join(config.output_dir, kPortfolioCsv));
    std::istringstream stream(csv);
    std::string line;
    if (!std::getline(stream, line) || split_csv_line(line) != std::vector<std::string>{"date", "price"}) {
        throw FormatError("portfolio CSV header must be date,price");
    }
    while (std::getline(stream, line)) {
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2) throw FormatError("portfolio CSV rows need 2 fields");
        auto price = parse_double(fields[1]);
        if (!price) throw FormatError("unparsable portfolio price");
        artifacts.series.dates.push_back(Date::parse(fields[0]));
        artifacts.series.prices.push_back(*price);
    }
    if (artifacts.series.dates.empty()) {
        throw EmptyInputError("portfolio CSV contains no data rows");
    }
    return artifacts;
}

Dataset load_dataset(const PipelineConfig& config, const std::string& split) {
    return parse_dataset_csv(read_text_file(join(config.output_dir, dataset_csv_name(split))));
}

nlohmann::json rates_to_json(const DirectionalRates& rates) {
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    return nlohmann::json{{"recall_up", opt(rates.recall_up)},
                          {"recall_down", opt(rates.recall_down)},
                          {"precision_up", opt(rates.precision_up)},
                          {"precision_down", opt(rates.precision_down)}};
}

nlohmann::json summary_to_json(const BacktestSummary& summary) {
    return nlohmann::json{{"total_pnl", summary.total_pnl},
                          {"max_drawdown", summary.max_drawdown},
                          {"hit_rate", summary.hit_rate},
                          {"position_count", summary.position_count}};
}

}  // namespace

std::pair<std::string, std::string> run_synth(const PipelineConfig& config) {
    config.synth.validate();
    auto [series_a, series_b] = generate_pair(config.synth);
    const std::string path_a =
        config.csv_a.empty() ? join(config.output_dir, "data/synth_a.csv") : config.csv_a;
    const std::string path_b =
        config.csv_b.empty() ? join(config.output_dir, "data/synth_b.csv") : config.csv_b;
    write_text_file(path_a, serialize_csv(series_a));
    write_text_file(path_b, serialize_csv(series_b));
    return {path_a, path_b};
}

IngestResult run_ingest(const PipelineConfig& config) {
    if (config.csv_a.empty() || config.csv_b.empty()) {
        throw ValidationError("csv_a and csv_b must be set for ingest");
    }
    IngestResult result;

    const ParseResult raw_a =
        parse_cme_csv(read_text_file(config.csv_a), config.instrument_a, config.columns);
    const ParseResult raw_b =
        parse_cme_csv(read_text_file(config.csv_b), config.instrument_b, config.columns);
    result.parsed_a = raw_a.series.bars.size();
    result.parsed_b = raw_b.series.bars.size();
    result.excluded_parse_a = raw_a.excluded_rows;
    result.excluded_parse_b = raw_b.excluded_rows;

    const CleanResult clean_a = clean(raw_a.series, config.exclude_ranges);
    const CleanResult clean_b = clean(raw_b.series, config.exclude_ranges);
    result.excluded_range_a = clean_a.excluded_by_range;
    result.excluded_range_b = clean_b.excluded_by_range;
    result.invalid_a = clean_a.invalid_dropped;
    result.invalid_b = clean_b.invalid_dropped;

    if (clean_a.series.bars.empty() || clean_b.series.bars.empty()) {
        result.warning = "cleaning removed every row of " +
                         (clean_a.series.bars.empty() ? config.instrument_a : config.instrument_b) +
                         "; nothing to align";
    } else {
        result.pair = align(clean_a.series, clean_b.series);
    }

    write_text_file(join(config.output_dir, kAlignedCsv), serialize_aligned_csv(result.pair));
    nlohmann::json report{{"format_version", kModelFormatVersion},
                          {"instrument_a", config.instrument_a},
                          {"instrument_b", config.instrument_b},
                          {"rows_parsed_a", result.parsed_a},
                          {"rows_parsed_b", result.parsed_b},
                          {"rows_excluded_parse_a", result.excluded_parse_a},
                          {"rows_excluded_parse_b", result.excluded_parse_b},
                          {"rows_excluded_range_a", result.excluded_range_a},
                          {"rows_excluded_range_b", result.excluded_range_b},
                          {"rows_invalid_a", result.invalid_a},
                          {"rows_invalid_b", result.invalid_b},
                          {"aligned_rows", result.pair.size()},
                          {"warning", result.warning}};
    write_text_file(join(config.output_dir, kIngestReport), dump_json(report));
    result.outputs.add(kAlignedCsv);
    result.outputs.add(kIngestReport);
    return result;
}

PortfolioResult run_portfolio(const PipelineConfig& config) {
    const AlignedPair pair = load_aligned(config);
    const PairSplit split = chronological_split(pair, config.split);

    PortfolioResult result;
    result.standardizer = fit_standardizer(split.train);
    result.pca_train = pca_2d(standardize(split.train, result.standardizer));
    // Diagnostic loadings for the stability comparison: val/test standardized
    // with their own statistics, mirroring the train computation.
    result.pca_val = pca_2d(standardize(split.val, fit_standardizer(split.val)));
    result.pca_test = pca_2d(standardize(split.test, fit_standardizer(split.test)));
    result.variance_check =
        explained_variance_check(result.pca_train, config.pc1_variance_threshold);

    const Eigen::Vector2d pc2 = result.pca_train.loadings.row(1).transpose();
    result.series = portfolio_price(
        pair, pc2, config.portfolio_use_standardized ? &result.standardizer : nullptr);

    std::string csv = "date,price\n";
    for (std::size_t i = 0; i < result.series.dates.size(); ++i) {
        csv += result.series.dates[i].to_string();
        csv += ',';
        csv += format_double(result.series.prices[i]);
        csv += '\n';
    }
    write_text_file(join(config.output_dir, kPortfolioCsv), csv);

    nlohmann::json report{
        {"format_version", kModelFormatVersion},
        {"standardizer",
         {{"mean_a", result.standardizer.mean_a},
          {"mean_b", result.standardizer.mean_b},
          {"std_a", result.standardizer.std_a},
          {"std_b", result.standardizer.std_b}}},
        {"splits",
         {{"train", pca_to_report(result.pca_train)},
          {"val", pca_to_report(result.pca_val)},
          {"test", pca_to_report(result.pca_test)}}},
        {"variance_check",
         {{"passed", result.variance_check.passed},
          {"ratio_first", result.variance_check.ratio_first},
          {"ratio_second", result.variance_check.ratio_second},
          {"threshold", result.variance_check.threshold}}},
        {"portfolio_use_standardized", config.portfolio_use_standardized}};
    write_text_file(join(config.output_dir, kPcaReport), dump_json(report));

    result.outputs.add(kPortfolioCsv);
    result.outputs.add(kPcaReport);
    return result;
}

FeaturesResult run_features(const PipelineConfig& config) {
    const AlignedPair pair = load_aligned(config);
    const PortfolioArtifacts portfolio = load_portfolio(config);
    if (portfolio.series.dates.size() != pair.size()) {
        throw DataError("portfolio series and aligned pair disagree on length");
    }

    const FeatureMatrix features = build_features(pair, config.ma_windows, config.lags);
    const std::vector<int> all_labels = make_labels(portfolio.series.prices, config.horizon_days);

    // Feature rows start max_window+lags-2 rows into the pair; labels exist up
    // to pair row N - horizon - 1. Keep rows with both.
    const std::size_t feature_offset = pair.size() - static_cast<std::size_t>(features.n_rows());
    const std::size_t labeled_rows = all_labels.size();  // pair rows 0..labeled_rows-1
    if (labeled_rows <= feature_offset) {
        throw InsufficientDataError("no rows have both features and labels");
    }

    const PairSplit split = chronological_split(pair, config.split);
    const std::size_t n_train = split.train.size();
    const std::size_t n_val = split.val.size();

    auto cut = [&](std::size_t pair_begin, std::size_t pair_end) {
        // Clamp to rows that carry both a feature row and a label.
        const std::size_t begin = std::max(pair_begin, feature_offset);
        const std::size_t end = std::min(pair_end, labeled_rows);
        Dataset dataset;
        if (begin >= end) {
            throw SplitError("a split has no rows after feature warm-up and label trimming");
        }
        dataset.features.column_names = features.column_names;
        dataset.features.dates.assign(pair.dates.begin() + begin, pair.dates.begin() + end);
        dataset.features.rows = features.rows.middleRows(
            static_cast<Eigen::Index>(begin - feature_offset),
            static_cast<Eigen::Index>(end - begin));
        dataset.labels.assign(all_labels.begin() + begin, all_labels.begin() + end);
        return dataset;
    };

    FeaturesResult result;
    result.train = cut(0, n_train);
    result.val = cut(n_train, n_train + n_val);
    result.test = cut(n_train + n_val, pair.size());
    result.scaler = fit_scaler(result.train.features);

    const std::pair<const char*, const Dataset*> exports[] = {
        {"train", &result.train}, {"val", &result.val}, {"test", &result.test}};
    for (const auto& [name, dataset] : exports) {
        const std::string rel = dataset_csv_name(name);
        write_text_file(join(config.output_dir, rel), serialize_dataset_csv(*dataset));
        result.outputs.add(rel);
    }
    write_text_file(join(config.output_dir, kScalerJson), dump_json(scaler_to_json(result.scaler)));
    result.outputs.add(kScalerJson);
    return result;
}

namespace {

CdConfig cd_config_from(const PipelineConfig& config) {
    CdConfig cd;
    cd.cd_steps = config.cd_steps;
    cd.epochs = config.rbm_epochs;
    cd.minibatch_size = config.rbm_minibatch;
    cd.rng_seed = derive_subseed(config.seed, "pretrain.dbn");
    cd.shuffle_each_epoch = config.shuffle_each_epoch;
    return cd;
}

}  // namespace

PretrainResult run_pretrain(const PipelineConfig& config) {
    const Dataset train = load_dataset(config, "train");
    const Dataset val = load_dataset(config, "val");
    const MinMaxScaler scaler =
        scaler_from_json(load_json(read_text_file(join(config.output_dir, kScalerJson))));

    FeatureMatrix train_scaled = apply_scaler(scaler, train.features);
    FeatureMatrix val_scaled = apply_scaler(scaler, val.features);

    // Per-kind learning rates: a single CdConfig carries one optional rate, so
    // train the two layers separately when the configured rates differ from
    // the kind defaults.
    CdConfig cd = cd_config_from(config);
    DbnSizes sizes{config.dbn_hidden1, config.dbn_hidden2};

    PretrainResult result;
    if (config.rbm_lr_gaussian == cd.effective_learning_rate(RbmKind::GaussianBernoulli) &&
        config.rbm_lr_bernoulli == cd.effective_learning_rate(RbmKind::BernoulliBernoulli)) {
        auto [model, traces] = dbn_pretrain(train_scaled, val_scaled, sizes, cd);
        result.model = std::move(model);
        result.traces = std::move(traces);
    } else {
        // Mirror dbn_pretrain with explicit per-layer rates.
        Rng init1 = make_rng(cd.rng_seed, "dbn.init.layer1");
        RbmLayer layer1 = init_rbm_layer(RbmKind::GaussianBernoulli, train_scaled.n_cols(),
                                         sizes.hidden1, init1);
        CdConfig cd1 = cd;
        cd1.learning_rate = config.rbm_lr_gaussian;
        cd1.rng_seed = derive_subseed(cd.rng_seed, "dbn.train.layer1");
        auto [trained1, trace1] = train_rbm(layer1, train_scaled.rows, val_scaled.rows, cd1);

        Eigen::MatrixXd train2 = hidden_probabilities(trained1, train_scaled.rows);
        Eigen::MatrixXd val2 = hidden_probabilities(trained1, val_scaled.rows);
        Rng init2 = make_rng(cd.rng_seed, "dbn.init.layer2");
        RbmLayer layer2 =
            init_rbm_layer(RbmKind::BernoulliBernoulli, sizes.hidden1, sizes.hidden2, init2);
        CdConfig cd2 = cd;
        cd2.learning_rate = config.rbm_lr_bernoulli;
        cd2.rng_seed = derive_subseed(cd.rng_seed, "dbn.train.layer2");
        auto [trained2, trace2] = train_rbm(layer2, train2, val2, cd2);

        result.model.layers = {std::move(trained1), std::move(trained2)};
        result.traces = {std::move(trace1), std::move(trace2)};
    }

    write_text_file(join(config.output_dir, kDbnJson),
                    dump_json(dbn_to_json(result.model, cd)));
    result.outputs.add(kDbnJson);
    for (std::size_t layer = 0; layer < result.traces.size(); ++layer) {
        std::string csv = "epoch,train_mse,val_mse\n";
        const auto& trace = result.traces[layer];
        for (std::size_t epoch = 0; epoch < trace.train_mse.size(); ++epoch) {
            csv += std::to_string(epoch + 1);
            csv += ',';
            csv += format_double(trace.train_mse[epoch]);
            csv += ',';
            csv += epoch < trace.val_mse.size() ? format_double(trace.val_mse[epoch]) : "";
            csv += '\n';
        }
        const std::string rel = rbm_trace_name(layer);
        write_text_file(join(config.output_dir, rel), csv);
        result.outputs.add(rel);
    }
    return result;
}

TrainResult run_train(const PipelineConfig& config) {
    const Dataset train = load_dataset(config, "train");
    const Dataset val = load_dataset(config, "val");
    const MinMaxScaler scaler =
        scaler_from_json(load_json(read_text_file(join(config.output_dir, kScalerJson))));
    const DbnModel dbn = dbn_from_json(load_json(read_text_file(join(config.output_dir, kDbnJson))));

    const LatentMode mode = config.latent_mode_enum();
    const FeatureMatrix train_scaled = apply_scaler(scaler, train.features);

    TrainResult result;
    result.classifier.scaler = scaler;
    result.classifier.dbn = dbn;
    result.classifier.latent_mode = mode;

    if (config.classifier == "logreg" || config.classifier == "svm") {
        const Eigen::MatrixXd latent = dbn_transform(dbn, train_scaled.rows, mode,
                                                     derive_subseed(config.seed, "train.latent"));
        if (config.classifier == "logreg") {
            result.classifier.model = logreg_train(latent, train.labels, config.logreg_lambda,
                                                   config.logreg_lr, config.logreg_epochs);
        } else {
            // C selected on validation by mean per-direction recall
            // (undefined recalls count as 0); ties keep the smaller C.
            std::vector<double> grid = config.svm_c_grid;
            std::sort(grid.begin(), grid.end());
            double best_score = -1.0;
            nlohmann::json grid_report = nlohmann::json::array();
            SvmModel best_model;
            for (double cost : grid) {
                SvmModel candidate = svm_train(latent, train.labels, cost, config.svm_gamma);
                TrainedClassifier probe{candidate, scaler, dbn, mode};
                const ConfusionCounts counts = confusion(classifier_predict(probe, val), val.labels);
                const DirectionalRates rates = precision_recall(counts);
                const double score = (rates.recall_up.value_or(0.0) +
                                      rates.recall_down.value_or(0.0)) / 2.0;
                grid_report.push_back(nlohmann::json{{"cost", cost},
                                                     {"mean_recall", score},
                                                     {"rates", rates_to_json(rates)}});
                if (score > best_score) {
                    best_score = score;
                    best_model = std::move(candidate);
                    result.selected_cost = cost;
                }
            }
            result.classifier.model = std::move(best_model);
            nlohmann::json selection{{"format_version", kModelFormatVersion},
                                     {"gamma", config.svm_gamma},
                                     {"grid", grid_report},
                                     {"selected_cost", result.selected_cost},
                                     {"selection_metric", "mean per-direction validation recall"}};
            write_text_file(join(config.output_dir, kSvmSelection), dump_json(selection));
            result.outputs.add(kSvmSelection);
        }
    } else if (config.classifier == "nn") {
        Rng init = make_rng(config.seed, "train.nn.init");
        NeuralNet net = nn_from_dbn(dbn, init);
        NnTrainConfig nn_config;
        nn_config.epochs = config.nn_epochs;
        nn_config.minibatch_size = config.nn_minibatch;
        nn_config.learning_rate = config.nn_lr;
        nn_config.momentum = config.nn_momentum;
        nn_config.rng_seed = derive_subseed(config.seed, "train.nn");
        auto [trained, trace] = nn_train(net, train_scaled.rows, train.labels, nn_config);
        result.classifier.model = std::move(trained);
        result.nn_mse_trace = std::move(trace);

        std::string csv = "epoch,train_mse\n";
        for (std::size_t epoch = 0; epoch < result.nn_mse_trace.size(); ++epoch) {
            csv += std::to_string(epoch + 1);
            csv += ',';
            csv += format_double(result.nn_mse_trace[epoch]);
            csv += '\n';
        }
        write_text_file(join(config.output_dir, kNnTrace), csv);
        result.outputs.add(kNnTrace);
    } else {
        throw ValidationError("classifier must be \"logreg\", \"svm\" or \"nn\"");
    }

    write_text_file(join(config.output_dir, kClassifierJson),
                    dump_json(classifier_to_json(result.classifier)));
    result.outputs.add(kClassifierJson);
    return result;
}

EvaluateResult run_evaluate(const PipelineConfig& config) {
    const TrainedClassifier classifier =
        classifier_from_json(load_json(read_text_file(join(config.output_dir, kClassifierJson))));

    EvaluateResult result;
    nlohmann::json report_splits = nlohmann::json::array();
    for (const char* split : {"train", "val", "test"}) {
        const Dataset dataset = load_dataset(config, split);
        SplitMetrics metrics;
        metrics.split = split;
        metrics.counts = confusion(classifier_predict(classifier, dataset), dataset.labels);
        metrics.rates = precision_recall(metrics.counts);
        const RocCurve curve = roc(classifier_scores(classifier, dataset), dataset.labels);
        metrics.auc = curve.auc;
        result.splits.push_back(metrics);

        std::string roc_csv = "fpr,tpr\n";
        for (const auto& [fpr, tpr] : curve.points) {
            roc_csv += format_double(fpr);
            roc_csv += ',';
            roc_csv += format_double(tpr);
            roc_csv += '\n';
        }
        const std::string rel = roc_csv_name(split);
        write_text_file(join(config.output_dir, rel), roc_csv);
        result.outputs.add(rel);

        report_splits.push_back(nlohmann::json{{"split", metrics.split},
                                               {"counts",
                                                {{"tp", metrics.counts.tp},
                                                 {"fp", metrics.counts.fp},
                                                 {"tn", metrics.counts.tn},
                                                 {"fn", metrics.counts.fn}}},
                                               {"accuracy", metrics.counts.accuracy()},
                                               {"rates", rates_to_json(metrics.rates)},
                                               {"auc", metrics.auc}});
    }

    nlohmann::json report{{"format_version", kModelFormatVersion},
                          {"classifier", classifier.kind()},
                          {"splits", report_splits}};
    write_text_file(join(config.output_dir, kMetricsReport), dump_json(report));
    result.outputs.add(kMetricsReport);
    return result;
}

BacktestResult run_backtest(const PipelineConfig& config) {
    const AlignedPair pair = load_aligned(config);
    const Dataset test = load_dataset(config, "test");
    const TrainedClassifier classifier =
        classifier_from_json(load_json(read_text_file(join(config.output_dir, kClassifierJson))));

    // The test rows are a contiguous block of the pair; trade from its first
    // date through the end so every signal has its exit day available.
    const Date first = test.features.dates.front();
    const auto begin =
        std::lower_bound(pair.dates.begin(), pair.dates.end(), first);
    if (begin == pair.dates.end() || !(*begin == first)) {
        throw DataError("test dataset dates are not part of the aligned pair");
    }
    const auto start = static_cast<std::size_t>(begin - pair.dates.begin());
    AlignedPair tradable;
    tradable.dates.assign(pair.dates.begin() + start, pair.dates.end());
    tradable.prices_a.assign(pair.prices_a.begin() + start, pair.prices_a.end());
    tradable.prices_b.assign(pair.prices_b.begin() + start, pair.prices_b.end());

    const std::vector<int> signals = signals_from_classifier(classifier, test);
    BacktestResult result;
    result.ledger = simulate(tradable, signals, config.strategy);
    result.summary = summarize(result.ledger);

    const std::vector<int> random_signals = random_baseline(signals.size(), config.seed);
    const PnlLedger random_ledger = simulate(tradable, random_signals, config.strategy);
    result.random_summary = summarize(random_ledger);

    std::string positions_csv = "entry_date,exit_date,direction,entry_a,entry_b,exit_a,exit_b,pnl\n";
    for (const auto& pos : result.ledger.positions) {
        positions_csv += result.ledger.dates[pos.entry_index].to_string();
        positions_csv += ',';
        positions_csv += result.ledger.dates[pos.exit_index].to_string();
        positions_csv += ',';
        positions_csv += pos.direction == Direction::LongPortfolio ? "long" : "short";
        positions_csv += ',';
        positions_csv += format_double(pos.entry_a);
        positions_csv += ',';
        positions_csv += format_double(pos.entry_b);
        positions_csv += ',';
        positions_csv += format_double(pos.exit_a);
        positions_csv += ',';
        positions_csv += format_double(pos.exit_b);
        positions_csv += ',';
        positions_csv += format_double(pos.pnl);
        positions_csv += '\n';
    }
    write_text_file(join(config.output_dir, kPositionsCsv), positions_csv);

    std::string pnl_csv = "date,cumulative_pnl,cumulative_pnl_random\n";
    for (std::size_t i = 0; i < result.ledger.dates.size(); ++i) {
        pnl_csv += result.ledger.dates[i].to_string();
        pnl_csv += ',';
        pnl_csv += format_double(result.ledger.cumulative_pnl[i]);
        pnl_csv += ',';
        pnl_csv += format_double(random_ledger.cumulative_pnl[i]);
        pnl_csv += '\n';
    }
    write_text_file(join(config.output_dir, kPnlCsv), pnl_csv);

    nlohmann::json report{{"format_version", kModelFormatVersion},
                          {"strategy",
                           {{"size_a", config.strategy.size_a},
                            {"size_b", config.strategy.size_b},
                            {"horizon_days", config.strategy.horizon_days},
                            {"point_value_a", config.strategy.point_value_a},
                            {"point_value_b", config.strategy.point_value_b},
                            {"invert_signal", config.strategy.invert_signal},
                            {"transaction_cost_per_contract",
                             config.strategy.transaction_cost_per_contract}}},
                          {"summary", summary_to_json(result.summary)},
                          {"random_baseline", summary_to_json(result.random_summary)}};
    write_text_file(join(config.output_dir, kBacktestReport), dump_json(report));

    result.outputs.add(kPositionsCsv);
    result.outputs.add(kPnlCsv);
    result.outputs.add(kBacktestReport);
    return result;
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& [path, digest] : file_digests) {
        files.push_back(nlohmann::json{{"path", path}, {"fnv1a64", digest}});
    }
    return nlohmann::json{{"pipeline_version", pipeline_version},
                          {"seed", seed},
                          {"config", config_snapshot},
                          {"files", files}};
}

namespace {

template <typename F>
auto run_stage(const char* name, F&& stage) {
    try {
        return stage();
    } catch (const ValidationError& e) {
        throw ValidationError("stage " + std::string(name) + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError("stage " + std::string(name) + ": " + e.what());
    } catch (const NumericError& e) {
        throw NumericError("stage " + std::string(name) + ": " + e.what());
    }
}

std::string hex_digest(const std::string& content) {
    const std::uint64_t digest = fnv1a64(content);
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 0; i < 16; ++i) {
        out[15 - i] = hex[(digest >> (4 * i)) & 0xF];
    }
    return out;
}

}  // namespace

RunManifest run_pipeline(const PipelineConfig& config) {
    config.validate();

    StageFiles all;
    nlohmann::json timings = nlohmann::json::object();
    auto timed = [&](const char* name, auto&& stage) {
        const auto start = std::chrono::steady_clock::now();
        auto result = run_stage(name, stage);
        const auto elapsed = std::chrono::steady_clock::now() - start;
        timings[name] =
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
        all.merge(result.outputs);
        return result;
    };

    timed("ingest", [&] { return run_ingest(config); });
    timed("portfolio", [&] { return run_portfolio(config); });
    timed("features", [&] { return run_features(config); });
    timed("pretrain", [&] { return run_pretrain(config); });
    timed("train", [&] { return run_train(config); });
    timed("evaluate", [&] { return run_evaluate(config); });
    timed("backtest", [&] { return run_backtest(config); });

    RunManifest manifest;
    manifest.pipeline_version = kVersion;
    manifest.seed = config.seed;
    manifest.config_snapshot = config.to_json();
    for (const auto& rel : all.files) {
        manifest.file_digests.emplace_back(rel,
                                           hex_digest(read_text_file(join(config.output_dir, rel))));
    }

    // Timings go to a sidecar so the manifest itself is reproducible.
    write_text_file(join(config.output_dir, "timings.json"), dump_json(timings));
    write_text_file(join(config.output_dir, "manifest.json"), dump_json(manifest.to_json()));
    return manifest;
}

}  // namespace deepspread
