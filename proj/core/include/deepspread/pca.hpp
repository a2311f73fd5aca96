#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "deepspread/date.hpp"
#include "deepspread/market_data.hpp"

namespace deepspread {

/// Per-leg population mean and standard deviation (training statistics).
struct Standardizer {
    double mean_a = 0.0;
    double mean_b = 0.0;
    double std_a = 1.0;
    double std_b = 1.0;
};

/// 2-D PCA result. Loading rows are unit-norm orthogonal components ordered
/// by descending explained variance; the sign convention makes the first
/// nonzero loading entry of each component non-negative.
struct PcaResult {
    Eigen::Matrix2d loadings;                 // rows = components, cols = instruments
    Eigen::Vector2d explained_variance_ratio; // descending, sums to 1
};

struct PortfolioSeries {
    std::vector<Date> dates;
    std::vector<double> prices;
};

struct VarianceCheck {
    bool passed = false;
    double ratio_first = 0.0;
    double ratio_second = 0.0;
    double threshold = 0.0;
};

/// Population moments (divisor n) of each leg. Throws DegenerateDataError on
/// zero variance, InsufficientDataError for fewer than 2 rows.
Standardizer fit_standardizer(const AlignedPair& train_pair);

/// (p - mean) / std per leg.
AlignedPair standardize(const AlignedPair& pair, const Standardizer& stats);

/// Closed-form eigen-decomposition of the 2x2 sample covariance (divisor n)
/// of an already-standardized pair. Throws NumericError on a non-finite
/// covariance.
PcaResult pca_2d(const AlignedPair& standardized_pair);

/// prices[t] = w_a * p_a[t] + w_b * p_b[t] on raw mid-prices. Pass the
/// training Standardizer to weight standardized prices instead.
PortfolioSeries portfolio_price(const AlignedPair& pair, const Eigen::Vector2d& loadings_pc2,
                                const Standardizer* standardizer = nullptr);

/// True iff the first component explains at least `threshold` of the
/// variance (inclusive).
VarianceCheck explained_variance_check(const PcaResult& result, double threshold = 0.99);

}  // namespace deepspread
