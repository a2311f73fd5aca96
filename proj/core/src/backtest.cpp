#include "deepspread/backtest.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "deepspread/errors.hpp"
#include "deepspread/rng.hpp"

namespace deepspread {

void StrategyConfig::validate() const {
    if (size_a < 1 || size_b < 1) throw ValidationError("contract sizes must be >= 1");
    if (horizon_days < 1) throw ValidationError("holding period must be >= 1 day");
    if (!(point_value_a > 0.0) || !(point_value_b > 0.0)) {
        throw ValidationError("point values must be positive");
    }
    if (transaction_cost_per_contract < 0.0) {
        throw ValidationError("transaction cost must be >= 0");
    }
}

std::vector<int> signals_from_classifier(const TrainedClassifier& classifier,
                                         const Dataset& dataset) {
    return classifier_predict(classifier, dataset);
}

PnlLedger simulate(const AlignedPair& pair, const std::vector<int>& signals,
                   const StrategyConfig& config) {
    config.validate();
    if (signals.empty()) {
        throw EmptyInputError("no signals to simulate");
    }
    const auto horizon = static_cast<std::size_t>(config.horizon_days);
    if (signals.size() + horizon > pair.size()) {
        throw DataError("signals need " + std::to_string(signals.size() + horizon) +
                        " tradable days but the pair has " + std::to_string(pair.size()));
    }

    PnlLedger ledger;
    ledger.dates = pair.dates;
    // Round-trip costs for both legs: per contract, per side, two sides.
    const double cost = config.transaction_cost_per_contract *
                        static_cast<double>(config.size_a + config.size_b) * 2.0;

    std::vector<double> realized_at(pair.size(), 0.0);
    for (std::size_t t = 0; t < signals.size(); ++t) {
        if (signals[t] != 1 && signals[t] != -1) {
            throw ValidationError("signals must be +1 or -1");
        }
        Position pos;
        pos.entry_index = t;
        pos.exit_index = t + horizon;
        // The stated rule bets against a predicted portfolio rise; the
        // conventional mapping (invert_signal = false) rides it.
        const bool short_portfolio = config.invert_signal ? signals[t] == 1 : signals[t] == -1;
        pos.direction = short_portfolio ? Direction::ShortPortfolio : Direction::LongPortfolio;
        pos.entry_a = pair.prices_a[t];
        pos.entry_b = pair.prices_b[t];
        pos.exit_a = pair.prices_a[t + horizon];
        pos.exit_b = pair.prices_b[t + horizon];

        const double long_pnl =
            static_cast<double>(config.size_a) * config.point_value_a * (pos.exit_a - pos.entry_a) -
            static_cast<double>(config.size_b) * config.point_value_b * (pos.exit_b - pos.entry_b);
        pos.pnl = (short_portfolio ? -long_pnl : long_pnl) - cost;
        realized_at[pos.exit_index] += pos.pnl;
        ledger.positions.push_back(pos);
    }

    ledger.cumulative_pnl.resize(pair.size());
    double running = 0.0;
    for (std::size_t t = 0; t < pair.size(); ++t) {
        running += realized_at[t];
        ledger.cumulative_pnl[t] = running;
    }
    return ledger;
}

std::vector<int> random_baseline(std::size_t n, std::uint64_t seed) {
    Rng rng = make_rng(seed, "backtest.random_baseline");
    std::bernoulli_distribution coin(0.5);
    std::vector<int> signals(n);
    for (auto& s : signals) {
        s = coin(rng) ? 1 : -1;
    }
    return signals;
}

BacktestSummary summarize(const PnlLedger& ledger) {
    BacktestSummary summary;
    summary.position_count = ledger.positions.size();
    std::size_t winners = 0;
    for (const auto& pos : ledger.positions) {
        summary.total_pnl += pos.pnl;
        if (pos.pnl > 0.0) ++winners;
    }
    if (!ledger.positions.empty()) {
        summary.hit_rate = static_cast<double>(winners) / static_cast<double>(summary.position_count);
    }
    double peak = 0.0;
    for (double level : ledger.cumulative_pnl) {
        peak = std::max(peak, level);
        summary.max_drawdown = std::max(summary.max_drawdown, peak - level);
    }
    return summary;
}

}  // namespace deepspread
