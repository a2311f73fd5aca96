#pragma once

#include <cstdint>
#include <utility>

#include "deepspread/market_data.hpp"

namespace deepspread {

/// Cointegrated two-instrument generator: a shared random-walk factor (an
/// interest-rate proxy) drives both legs, each with small independent AR(1)
/// noise on top. OHLC is built around the mid so that (open+close)/2
/// reproduces the model mid exactly.
struct SynthConfig {
    int days = 2000;
    Date start_date{1990, 1, 2};
    double base_a = 118.0;
    double base_b = 126.0;
    double beta_a = 1.0;   // leg sensitivity to the common factor
    double beta_b = 1.0;
    double factor_vol = 0.05;  // daily random-walk step std
    double noise_vol = 0.04;   // AR(1) innovation std per leg
    double noise_rho = 0.6;    // AR(1) persistence
    double oc_spread_vol = 0.02;  // open/close half-spread std
    double hl_pad_vol = 0.03;     // extra high/low padding scale
    std::uint64_t seed = 42;

    void validate() const;
};

/// Generate the two series (weekends skipped, so dates are trading days).
std::pair<DailyBarSeries, DailyBarSeries> generate_pair(const SynthConfig& config);

}  // namespace deepspread
