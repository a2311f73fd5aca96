#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "deepspread/date.hpp"
#include "deepspread/market_data.hpp"

namespace deepspread {

/// Rows of trend features aligned to dates. The canonical build yields
/// 2 instruments x 2 MA windows x 5 lags = 20 columns.
struct FeatureMatrix {
    std::vector<Date> dates;
    Eigen::MatrixXd rows;                   // n x k, all entries finite
    std::vector<std::string> column_names;  // instrument / window / lag descriptors

    Eigen::Index n_rows() const { return rows.rows(); }
    Eigen::Index n_cols() const { return rows.cols(); }
};

/// Per-column min/max taken from the training rows only.
struct MinMaxScaler {
    Eigen::VectorXd col_min;
    Eigen::VectorXd col_max;
};

/// Feature rows with aligned {+1,-1} direction labels.
struct Dataset {
    FeatureMatrix features;
    std::vector<int> labels;  // +1 / -1, one per feature row
};

/// Trailing mean over `window` points. Entries before index window-1 are NaN
/// (undefined). Throws InsufficientDataError when |prices| < window.
std::vector<double> moving_average(const std::vector<double>& prices, int window);

/// prices[i] - moving_average(prices, window)[i]; NaN where the MA is
/// undefined.
std::vector<double> trend(const std::vector<double>& prices, int window);

/// Build lagged trend features for both legs: for each instrument, each MA
/// window and each lag in [0, lags), column value at date t is
/// trend[t - lag]. Head rows with any undefined constituent are dropped, so
/// the first emitted row sits at index (max_window - 1) + (lags - 1) of the
/// pair. Throws InsufficientDataError when the pair is too short to emit a
/// single row.
FeatureMatrix build_features(const AlignedPair& pair,
                             const std::vector<int>& ma_windows = {5, 10},
                             int lags = 5);

/// Column extrema over the given (training) matrix.
MinMaxScaler fit_scaler(const FeatureMatrix& train);

/// x -> (x - min) / (max - min) per column. A constant training column maps
/// to 0. Values outside the training range are not clipped.
FeatureMatrix apply_scaler(const MinMaxScaler& scaler, const FeatureMatrix& m);

/// label[t] = +1 if prices[t + horizon] > prices[t], else -1 (ties are -1).
/// Output length is |prices| - horizon.
std::vector<int> make_labels(const std::vector<double>& portfolio_prices, int horizon = 5);

/// Dataset export: date, feature columns, label.
std::string serialize_dataset_csv(const Dataset& dataset);

/// Inverse of serialize_dataset_csv.
Dataset parse_dataset_csv(const std::string& text);

}  // namespace deepspread
