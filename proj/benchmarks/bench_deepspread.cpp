// Micro-benchmarks for the hot paths: CD updates, the DBN forward pass, the
// closed-form PCA, SMO training, the backtest simulator and the ROC sweep.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <random>
#include <vector>

#include <deepspread/backtest.hpp>
#include <deepspread/classifiers.hpp>
#include <deepspread/market_data.hpp>
#include <deepspread/metrics.hpp>
#include <deepspread/pca.hpp>
#include <deepspread/rbm.hpp>
#include <deepspread/rng.hpp>
#include <deepspread/synth.hpp>

using namespace deepspread;

namespace {

Eigen::MatrixXd random_unit_rows(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = unit(rng);
    return m;
}

AlignedPair synthetic_pair() {
    SynthConfig config;
    auto [a, b] = generate_pair(config);
    return align(a, b);
}

void bench_cd_update(benchmark::State& state) {
    Rng init = make_rng(1, "bench.init");
    RbmLayer layer = init_rbm_layer(RbmKind::GaussianBernoulli, 20, 15, init);
    const Eigen::MatrixXd batch = random_unit_rows(100, 20, 2);
    CdConfig config;
    Rng rng = make_rng(3, "bench.gibbs");
    for (auto _ : state) {
        benchmark::DoNotOptimize(cd_update(layer, batch, config, rng));
    }
}
BENCHMARK(bench_cd_update);

void bench_dbn_transform(benchmark::State& state) {
    Rng init = make_rng(4, "bench.dbn");
    DbnModel model;
    model.layers.push_back(init_rbm_layer(RbmKind::GaussianBernoulli, 20, 15, init));
    model.layers.push_back(init_rbm_layer(RbmKind::BernoulliBernoulli, 15, 20, init));
    const Eigen::MatrixXd features = random_unit_rows(1600, 20, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dbn_transform(model, features));
    }
}
BENCHMARK(bench_dbn_transform);

void bench_pca_2d(benchmark::State& state) {
    AlignedPair pair = synthetic_pair();
    Standardizer stats = fit_standardizer(pair);
    AlignedPair z = standardize(pair, stats);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pca_2d(z));
    }
}
BENCHMARK(bench_pca_2d);

void bench_svm_train(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(6);
    std::normal_distribution<double> gauss(0.0, 0.6);
    Eigen::MatrixXd X(n, 2);
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) {
        const bool up = i % 2 == 0;
        X(i, 0) = gauss(rng) + (up ? 1.0 : -1.0);
        X(i, 1) = gauss(rng) + (up ? 1.0 : -1.0);
        y[i] = up ? 1 : -1;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(svm_train(X, y, 1.0, 0.5));
    }
}
BENCHMARK(bench_svm_train)->Arg(200)->Arg(400);

void bench_simulate(benchmark::State& state) {
    AlignedPair pair = synthetic_pair();
    StrategyConfig config;
    std::mt19937_64 rng(7);
    std::vector<int> signals;
    for (std::size_t t = 0; t + config.horizon_days < pair.size(); ++t) {
        signals.push_back(rng() % 2 == 0 ? 1 : -1);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(pair, signals, config));
    }
}
BENCHMARK(bench_simulate);

void bench_roc(benchmark::State& state) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = 2000;
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
        scores[i] = unit(rng);
        labels[i] = unit(rng) < 0.5 ? 1 : -1;
    }
    labels[0] = 1;
    labels[1] = -1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(roc(scores, labels));
    }
}
BENCHMARK(bench_roc);

}  // namespace

BENCHMARK_MAIN();
