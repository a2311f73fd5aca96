#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "deepspread/date.hpp"

namespace deepspread {

/// One daily futures bar. Prices are quoted mid-prices.
struct DailyBar {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    std::int64_t volume = 0;
    std::int64_t open_interest = 0;

    /// low <= min(open, close), high >= max(open, close), prices finite and
    /// positive, counts non-negative.
    bool valid() const;
};

struct DailyBarSeries {
    std::string instrument;
    std::vector<DailyBar> bars;  // strictly increasing dates
};

/// Two instruments inner-joined on date; prices are (open+close)/2 mids.
struct AlignedPair {
    std::vector<Date> dates;
    std::vector<double> prices_a;
    std::vector<double> prices_b;

    std::size_t size() const { return dates.size(); }
};

struct SplitSpec {
    double train_frac = 0.8;
    double val_frac = 0.1;
    double test_frac = 0.1;

    /// Throws ValidationError unless each fraction is in (0,1) and they sum
    /// to 1 within 1e-9.
    void validate() const;
};

/// Logical -> actual CSV column names. "Close" is preferred; when absent the
/// fallback name (CME exports sometimes label it "Last") is used.
struct ColumnMapping {
    std::string date = "Date";
    std::string open = "Open";
    std::string high = "High";
    std::string low = "Low";
    std::string close = "Close";
    std::string close_fallback = "Last";
    std::string volume = "Volume";
    std::string open_interest = "Open Interest";
    std::string date_format = "%Y-%m-%d";
};

struct ParseResult {
    DailyBarSeries series;
    std::size_t excluded_rows = 0;  // rows dropped for unparsable/empty fields
};

struct CleanResult {
    DailyBarSeries series;
    std::size_t excluded_by_range = 0;
    std::size_t invalid_dropped = 0;
};

/// Parse a header-plus-rows CSV into a date-sorted series. Rows with any
/// unparsable or empty required field are excluded and counted.
/// Throws FormatError if the header lacks a required column, EmptyInputError
/// if the file has no data rows at all.
ParseResult parse_cme_csv(const std::string& text, const std::string& instrument,
                          const ColumnMapping& columns = {});

/// Drop bars inside any exclude interval and bars violating the DailyBar
/// invariants. Idempotent.
CleanResult clean(const DailyBarSeries& series, const std::vector<DateInterval>& exclude_ranges);

/// (open + close) / 2.
double mid_price(const DailyBar& bar);

/// Inner-join two cleaned series on date; output prices are mids.
/// Throws EmptyInputError when the date intersection is empty.
AlignedPair align(const DailyBarSeries& a, const DailyBarSeries& b);

struct PairSplit {
    AlignedPair train;
    AlignedPair val;
    AlignedPair test;
};

/// Contiguous order-preserving partition: floor(n*train), floor(n*val),
/// remainder to test. No shuffling. Throws SplitError if any segment would
/// be empty, InsufficientDataError for fewer than 3 rows.
PairSplit chronological_split(const AlignedPair& pair, const SplitSpec& spec);

/// Re-emit a series as CSV (Date,Open,High,Low,Close,Volume,Open Interest).
/// parse_cme_csv of the output reproduces the series exactly.
std::string serialize_csv(const DailyBarSeries& series);

/// Audit CSV with columns date,mid_a,mid_b.
std::string serialize_aligned_csv(const AlignedPair& pair);

/// Parse the audit CSV back into an AlignedPair.
AlignedPair parse_aligned_csv(const std::string& text);

}  // namespace deepspread
