#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "deepspread/backtest.hpp"
#include "deepspread/classifiers.hpp"
#include "deepspread/config.hpp"
#include "deepspread/metrics.hpp"
#include "deepspread/pca.hpp"

namespace deepspread {

/// Pipeline stages. Each stage reads its inputs from the config (or the
/// artifacts earlier stages left under output_dir), writes its outputs under
/// output_dir/{data,models,reports,traces}, and returns the relative paths
/// it wrote. Stages compose: run_pipeline is exactly the stages run in
/// order, plus the manifest.

struct StageFiles {
    std::vector<std::string> files;  // relative to output_dir

    void add(const std::string& path) { files.push_back(path); }
    void merge(const StageFiles& other);
};

struct IngestResult {
    AlignedPair pair;  // empty (with a warning) when cleaning removed everything
    std::size_t parsed_a = 0, parsed_b = 0;
    std::size_t excluded_parse_a = 0, excluded_parse_b = 0;
    std::size_t excluded_range_a = 0, excluded_range_b = 0;
    std::size_t invalid_a = 0, invalid_b = 0;
    std::string warning;
    StageFiles outputs;
};

struct PortfolioResult {
    Standardizer standardizer;
    PcaResult pca_train, pca_val, pca_test;
    VarianceCheck variance_check;
    PortfolioSeries series;  // full-range series under the train PC2
    StageFiles outputs;
};

struct FeaturesResult {
    Dataset train, val, test;  // raw (unscaled) features with labels
    MinMaxScaler scaler;       // fitted on the train rows; applied downstream
    StageFiles outputs;
};

struct PretrainResult {
    DbnModel model;
    std::vector<TrainTrace> traces;
    StageFiles outputs;
};

struct TrainResult {
    TrainedClassifier classifier;
    double selected_cost = 0.0;            // SVM only
    std::vector<double> nn_mse_trace;      // NN only
    StageFiles outputs;
};

struct SplitMetrics {
    std::string split;
    ConfusionCounts counts;
    DirectionalRates rates;
    double auc = 0.0;
};

struct EvaluateResult {
    std::vector<SplitMetrics> splits;
    StageFiles outputs;
};

struct BacktestResult {
    PnlLedger ledger;
    BacktestSummary summary;
    BacktestSummary random_summary;
    StageFiles outputs;
};

/// Write the synthetic pair to the configured csv_a / csv_b paths (defaults
/// under output_dir/data when unset). Returns the two paths written.
std::pair<std::string, std::string> run_synth(const PipelineConfig& config);

IngestResult run_ingest(const PipelineConfig& config);
PortfolioResult run_portfolio(const PipelineConfig& config);
FeaturesResult run_features(const PipelineConfig& config);
PretrainResult run_pretrain(const PipelineConfig& config);
TrainResult run_train(const PipelineConfig& config);
EvaluateResult run_evaluate(const PipelineConfig& config);
BacktestResult run_backtest(const PipelineConfig& config);

/// Deterministic run record: config snapshot, seed, per-file digests and
/// format versions. Wall-clock timings go to a separate sidecar file so the
/// manifest is byte-identical across reruns.
struct RunManifest {
    std::string pipeline_version;
    std::uint64_t seed = 0;
    nlohmann::json config_snapshot;
    std::vector<std::pair<std::string, std::string>> file_digests;  // path -> fnv1a64 hex

    nlohmann::json to_json() const;
};

/// Full run: ingest, portfolio, features, pretrain, train, evaluate,
/// backtest, then manifest.json (and timings.json). A failing stage aborts
/// with a stage-tagged error message.
RunManifest run_pipeline(const PipelineConfig& config);

// filesystem helpers shared by the stages and the CLI
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace deepspread
