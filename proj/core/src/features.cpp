#include "deepspread/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "deepspread/csv.hpp"
#include "deepspread/errors.hpp"

namespace deepspread {

std::vector<double> moving_average(const std::vector<double>& prices, int window) {
    if (window < 1) {
        throw ValidationError("moving-average window must be >= 1");
    }
    const auto n = prices.size();
    if (n < static_cast<std::size_t>(window)) {
        throw InsufficientDataError("moving average over " + std::to_string(window) +
                                    " points needs at least that many prices, got " +
                                    std::to_string(n));
    }
    std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
    double running = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        running += prices[i];
        if (i + 1 >= static_cast<std::size_t>(window)) {
            if (i + 1 > static_cast<std::size_t>(window)) {
                running -= prices[i - window];
            }
            out[i] = running / window;
        }
    }
    return out;
}

std::vector<double> trend(const std::vector<double>& prices, int window) {
    auto ma = moving_average(prices, window);
    for (std::size_t i = 0; i < prices.size(); ++i) {
        ma[i] = prices[i] - ma[i];  // NaN head propagates
    }
    return ma;
}

FeatureMatrix build_features(const AlignedPair& pair, const std::vector<int>& ma_windows,
                             int lags) {
    if (ma_windows.empty()) {
        throw ValidationError("need at least one moving-average window");
    }
    if (lags < 1) {
        throw ValidationError("lag count must be >= 1");
    }
    const int max_window = *std::max_element(ma_windows.begin(), ma_windows.end());
    const std::size_t first_row = static_cast<std::size_t>(max_window - 1) +
                                  static_cast<std::size_t>(lags - 1);
    if (pair.size() <= first_row) {
        throw InsufficientDataError("pair of " + std::to_string(pair.size()) +
                                    " rows is too short for windows/lags; need at least " +
                                    std::to_string(first_row + 1));
    }

    const std::size_t n_out = pair.size() - first_row;
    const std::size_t n_cols = 2 * ma_windows.size() * static_cast<std::size_t>(lags);

    FeatureMatrix out;
    out.rows.resize(static_cast<Eigen::Index>(n_out), static_cast<Eigen::Index>(n_cols));
    out.dates.assign(pair.dates.begin() + first_row, pair.dates.end());

    const std::pair<const char*, const std::vector<double>*> legs[] = {
        {"a", &pair.prices_a}, {"b", &pair.prices_b}};
    Eigen::Index col = 0;
    for (auto [leg_name, prices] : legs) {
        for (int window : ma_windows) {
            auto t = trend(*prices, window);
            for (int lag = 0; lag < lags; ++lag) {
                out.column_names.push_back(std::string(leg_name) + "_trend" +
                                           std::to_string(window) + "_lag" + std::to_string(lag));
                for (std::size_t i = 0; i < n_out; ++i) {
                    out.rows(static_cast<Eigen::Index>(i), col) = t[first_row + i - lag];
                }
                ++col;
            }
        }
    }
    return out;
}

MinMaxScaler fit_scaler(const FeatureMatrix& train) {
    if (train.n_rows() == 0) {
        throw EmptyInputError("cannot fit a scaler on an empty feature matrix");
    }
    MinMaxScaler scaler;
    scaler.col_min = train.rows.colwise().minCoeff();
    scaler.col_max = train.rows.colwise().maxCoeff();
    return scaler;
}

FeatureMatrix apply_scaler(const MinMaxScaler& scaler, const FeatureMatrix& m) {
    if (scaler.col_min.size() != m.n_cols()) {
        throw ShapeError("scaler has " + std::to_string(scaler.col_min.size()) +
                         " columns, matrix has " + std::to_string(m.n_cols()));
    }
    FeatureMatrix out = m;
    for (Eigen::Index c = 0; c < m.n_cols(); ++c) {
        const double range = scaler.col_max(c) - scaler.col_min(c);
        if (range == 0.0) {
            out.rows.col(c).setZero();
        } else {
            out.rows.col(c) = (m.rows.col(c).array() - scaler.col_min(c)) / range;
        }
    }
    return out;
}

std::vector<int> make_labels(const std::vector<double>& portfolio_prices, int horizon) {
    if (horizon < 1) {
        throw ValidationError("label horizon must be >= 1");
    }
    if (portfolio_prices.size() <= static_cast<std::size_t>(horizon)) {
        throw InsufficientDataError("need more than " + std::to_string(horizon) +
                                    " prices to label at that horizon");
    }
    std::vector<int> labels(portfolio_prices.size() - horizon);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        labels[i] = portfolio_prices[i + horizon] > portfolio_prices[i] ? 1 : -1;
    }
    return labels;
}

std::string serialize_dataset_csv(const Dataset& dataset) {
    if (static_cast<std::size_t>(dataset.features.n_rows()) != dataset.labels.size()) {
        throw ShapeError("dataset has " + std::to_string(dataset.features.n_rows()) +
                         " feature rows but " + std::to_string(dataset.labels.size()) + " labels");
    }
    std::string out = "date";
    for (const auto& name : dataset.features.column_names) {
        out += ',';
        out += name;
    }
    out += ",label\n";
    for (Eigen::Index i = 0; i < dataset.features.n_rows(); ++i) {
        out += dataset.features.dates[static_cast<std::size_t>(i)].to_string();
        for (Eigen::Index c = 0; c < dataset.features.n_cols(); ++c) {
            out += ',';
            out += format_double(dataset.features.rows(i, c));
        }
        out += ',';
        out += std::to_string(dataset.labels[static_cast<std::size_t>(i)]);
        out += '\n';
    }
    return out;
}

Dataset parse_dataset_csv(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    if (!std::getline(stream, line)) {
        throw EmptyInputError("empty dataset CSV");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_csv_line(line);
    if (header.size() < 3 || header.front() != "date" || header.back() != "label") {
        throw FormatError("dataset CSV header must be date,<features...>,label");
    }

    Dataset dataset;
    dataset.features.column_names.assign(header.begin() + 1, header.end() - 1);
    const std::size_t n_cols = dataset.features.column_names.size();

    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(stream, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw FormatError("dataset CSV row " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(header.size()));
        }
        dataset.features.dates.push_back(Date::parse(fields[0]));
        std::vector<double> row(n_cols);
        for (std::size_t c = 0; c < n_cols; ++c) {
            auto v = parse_double(fields[c + 1]);
            if (!v) {
                throw FormatError("dataset CSV row " + std::to_string(line_no) +
                                  " has an unparsable feature value");
            }
            row[c] = *v;
        }
        auto label = parse_int(fields.back());
        if (!label || (*label != 1 && *label != -1)) {
            throw FormatError("dataset CSV row " + std::to_string(line_no) +
                              " has a label other than +1/-1");
        }
        rows.push_back(std::move(row));
        dataset.labels.push_back(static_cast<int>(*label));
    }
    if (rows.empty()) {
        throw EmptyInputError("dataset CSV contains no data rows");
    }

    dataset.features.rows.resize(static_cast<Eigen::Index>(rows.size()),
                                 static_cast<Eigen::Index>(n_cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            dataset.features.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                rows[i][c];
        }
    }
    return dataset;
}

}  // namespace deepspread
