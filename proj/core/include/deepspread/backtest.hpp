#pragma once

#include <cstdint>
#include <vector>

#include "deepspread/classifiers.hpp"
#include "deepspread/market_data.hpp"

namespace deepspread {

struct StrategyConfig {
    int size_a = 10;                 // contracts, leg a (ZF)
    int size_b = 8;                  // contracts, leg b (ZN)
    int horizon_days = 5;            // holding period
    double point_value_a = 1000.0;   // dollars per full point per contract
    double point_value_b = 1000.0;
    /// true follows the stated rule literally (predicted 5-day rise -> short
    /// the portfolio); false is the conventional momentum mapping.
    bool invert_signal = true;
    double transaction_cost_per_contract = 0.0;

    void validate() const;
};

enum class Direction { LongPortfolio, ShortPortfolio };  // long = long a / short b

struct Position {
    std::size_t entry_index = 0;
    std::size_t exit_index = 0;
    Direction direction = Direction::LongPortfolio;
    double entry_a = 0.0, entry_b = 0.0;
    double exit_a = 0.0, exit_b = 0.0;
    double pnl = 0.0;  // realized dollars, costs included
};

struct PnlLedger {
    std::vector<Position> positions;        // ordered by entry index
    std::vector<Date> dates;                // trading dates of the simulated pair
    std::vector<double> cumulative_pnl;     // running sum of realized pnl at exits
};

struct BacktestSummary {
    double total_pnl = 0.0;
    double max_drawdown = 0.0;  // max peak-to-trough of the cumulative series
    double hit_rate = 0.0;      // fraction of positions with pnl > 0
    std::size_t position_count = 0;
};

/// Per-row predicted direction of the portfolio move over the label horizon.
std::vector<int> signals_from_classifier(const TrainedClassifier& classifier,
                                         const Dataset& dataset);

/// One hedged entry per signal day, squared off after horizon_days. A
/// long-portfolio position realizes
///   size_a * point_value_a * (p_a[t+h] - p_a[t])
///   - size_b * point_value_b * (p_b[t+h] - p_b[t]),
/// negated for short, with per-contract-per-side costs subtracted.
/// Overlapping positions are permitted. Throws DataError when signals extend
/// past the tradable range.
PnlLedger simulate(const AlignedPair& pair, const std::vector<int>& signals,
                   const StrategyConfig& config);

/// i.i.d. uniform {+1,-1} from the seeded stream.
std::vector<int> random_baseline(std::size_t n, std::uint64_t seed);

BacktestSummary summarize(const PnlLedger& ledger);

}  // namespace deepspread
