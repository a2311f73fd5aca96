#include "deepspread/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

#include "deepspread/csv.hpp"
#include "deepspread/errors.hpp"

namespace deepspread {

bool DailyBar::valid() const {
    const double prices[] = {open, high, low, close};
    for (double p : prices) {
        if (!std::isfinite(p) || p <= 0.0) return false;
    }
    if (low > std::min(open, close)) return false;
    if (high < std::max(open, close)) return false;
    if (volume < 0 || open_interest < 0) return false;
    return date.valid();
}

void SplitSpec::validate() const {
    for (double f : {train_frac, val_frac, test_frac}) {
        if (!(f > 0.0 && f < 1.0)) {
            throw ValidationError("split fractions must lie in (0,1)");
        }
    }
    if (std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-9) {
        throw ValidationError("split fractions must sum to 1");
    }
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

std::ptrdiff_t find_column(const std::vector<std::string>& header, std::string_view name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (iequals(header[i], name)) return static_cast<std::ptrdiff_t>(i);
    }
    return -1;
}

}  // namespace

ParseResult parse_cme_csv(const std::string& text, const std::string& instrument,
                          const ColumnMapping& columns) {
    auto lines = split_lines(text);
    if (lines.empty()) {
        throw EmptyInputError("no rows in CSV for " + instrument);
    }
    auto header = split_csv_line(lines[0]);

    const auto date_col = find_column(header, columns.date);
    const auto open_col = find_column(header, columns.open);
    const auto high_col = find_column(header, columns.high);
    const auto low_col = find_column(header, columns.low);
    auto close_col = find_column(header, columns.close);
    if (close_col < 0) close_col = find_column(header, columns.close_fallback);
    const auto volume_col = find_column(header, columns.volume);
    const auto oi_col = find_column(header, columns.open_interest);

    const std::pair<const char*, std::ptrdiff_t> required[] = {
        {"date", date_col}, {"open", open_col},     {"high", high_col},         {"low", low_col},
        {"close", close_col}, {"volume", volume_col}, {"open interest", oi_col},
    };
    for (auto [name, col] : required) {
        if (col < 0) {
            throw FormatError("CSV header for " + instrument + " is missing the " +
                              std::string(name) + " column");
        }
    }

    ParseResult result;
    result.series.instrument = instrument;

    std::size_t data_rows = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        ++data_rows;
        auto fields = split_csv_line(lines[i]);
        auto max_col = std::max({date_col, open_col, high_col, low_col, close_col, volume_col, oi_col});
        if (static_cast<std::ptrdiff_t>(fields.size()) <= max_col) {
            ++result.excluded_rows;
            continue;
        }
        DailyBar bar;
        try {
            bar.date = Date::parse(fields[date_col], columns.date_format);
        } catch (const FormatError&) {
            ++result.excluded_rows;
            continue;
        }
        auto open = parse_double(fields[open_col]);
        auto high = parse_double(fields[high_col]);
        auto low = parse_double(fields[low_col]);
        auto close = parse_double(fields[close_col]);
        auto volume = parse_int(fields[volume_col]);
        auto oi = parse_int(fields[oi_col]);
        if (!open || !high || !low || !close || !volume || !oi || *volume < 0 || *oi < 0) {
            ++result.excluded_rows;
            continue;
        }
        bar.open = *open;
        bar.high = *high;
        bar.low = *low;
        bar.close = *close;
        bar.volume = *volume;
        bar.open_interest = *oi;
        result.series.bars.push_back(bar);
    }

    if (data_rows == 0) {
        throw EmptyInputError("CSV for " + instrument + " contains a header but no data rows");
    }

    std::stable_sort(result.series.bars.begin(), result.series.bars.end(),
                     [](const DailyBar& x, const DailyBar& y) { return x.date < y.date; });
    // duplicate dates: keep the first occurrence, count the rest as excluded
    std::vector<DailyBar> deduped;
    deduped.reserve(result.series.bars.size());
    for (const auto& bar : result.series.bars) {
        if (!deduped.empty() && deduped.back().date == bar.date) {
            ++result.excluded_rows;
            continue;
        }
        deduped.push_back(bar);
    }
    result.series.bars = std::move(deduped);
    return result;
}

CleanResult clean(const DailyBarSeries& series, const std::vector<DateInterval>& exclude_ranges) {
    CleanResult result;
    result.series.instrument = series.instrument;
    result.series.bars.reserve(series.bars.size());
    for (const auto& bar : series.bars) {
        bool excluded = false;
        for (const auto& range : exclude_ranges) {
            if (range.contains(bar.date)) {
                excluded = true;
                break;
            }
        }
        if (excluded) {
            ++result.excluded_by_range;
            continue;
        }
        if (!bar.valid()) {
            ++result.invalid_dropped;
            continue;
        }
        result.series.bars.push_back(bar);
    }
    return result;
}

double mid_price(const DailyBar& bar) {
    return (bar.open + bar.close) / 2.0;
}

AlignedPair align(const DailyBarSeries& a, const DailyBarSeries& b) {
    AlignedPair pair;
    std::size_t ia = 0, ib = 0;
    while (ia < a.bars.size() && ib < b.bars.size()) {
        const Date& da = a.bars[ia].date;
        const Date& db = b.bars[ib].date;
        if (da < db) {
            ++ia;
        } else if (db < da) {
            ++ib;
        } else {
            pair.dates.push_back(da);
            pair.prices_a.push_back(mid_price(a.bars[ia]));
            pair.prices_b.push_back(mid_price(b.bars[ib]));
            ++ia;
            ++ib;
        }
    }
    if (pair.dates.empty()) {
        throw EmptyInputError("series " + a.instrument + " and " + b.instrument +
                              " share no dates");
    }
    return pair;
}

namespace {

AlignedPair slice(const AlignedPair& pair, std::size_t begin, std::size_t end) {
    AlignedPair out;
    out.dates.assign(pair.dates.begin() + begin, pair.dates.begin() + end);
    out.prices_a.assign(pair.prices_a.begin() + begin, pair.prices_a.begin() + end);
    out.prices_b.assign(pair.prices_b.begin() + begin, pair.prices_b.begin() + end);
    return out;
}

}  // namespace

PairSplit chronological_split(const AlignedPair& pair, const SplitSpec& spec) {
    spec.validate();
    const std::size_t n = pair.size();
    if (n < 3) {
        throw InsufficientDataError("need at least 3 rows to split, got " + std::to_string(n));
    }
    const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.train_frac));
    const auto n_val = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.val_frac));
    const std::size_t n_test = n - n_train - n_val;
    if (n_train == 0 || n_val == 0 || n_test == 0) {
        throw SplitError("split of " + std::to_string(n) + " rows leaves an empty segment (" +
                         std::to_string(n_train) + "/" + std::to_string(n_val) + "/" +
                         std::to_string(n_test) + ")");
    }
    return PairSplit{slice(pair, 0, n_train), slice(pair, n_train, n_train + n_val),
                     slice(pair, n_train + n_val, n)};
}

std::string serialize_csv(const DailyBarSeries& series) {
    std::string out = "Date,Open,High,Low,Close,Volume,Open Interest\n";
    for (const auto& bar : series.bars) {
        out += bar.date.to_string();
        out += ',';
        out += format_double(bar.open);
        out += ',';
        out += format_double(bar.high);
        out += ',';
        out += format_double(bar.low);
        out += ',';
        out += format_double(bar.close);
        out += ',';
        out += std::to_string(bar.volume);
        out += ',';
        out += std::to_string(bar.open_interest);
        out += '\n';
    }
    return out;
}

std::string serialize_aligned_csv(const AlignedPair& pair) {
    std::string out = "date,mid_a,mid_b\n";
    for (std::size_t i = 0; i < pair.size(); ++i) {
        out += pair.dates[i].to_string();
        out += ',';
        out += format_double(pair.prices_a[i]);
        out += ',';
        out += format_double(pair.prices_b[i]);
        out += '\n';
    }
    return out;
}

AlignedPair parse_aligned_csv(const std::string& text) {
    auto lines = split_lines(text);
    if (lines.empty()) {
        throw EmptyInputError("empty aligned CSV");
    }
    if (split_csv_line(lines[0]) != std::vector<std::string>{"date", "mid_a", "mid_b"}) {
        throw FormatError("aligned CSV header must be date,mid_a,mid_b");
    }
    AlignedPair pair;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        auto fields = split_csv_line(lines[i]);
        if (fields.size() != 3) {
            throw FormatError("aligned CSV row " + std::to_string(i + 1) + " has " +
                              std::to_string(fields.size()) + " fields");
        }
        auto a = parse_double(fields[1]);
        auto b = parse_double(fields[2]);
        if (!a || !b) {
            throw FormatError("aligned CSV row " + std::to_string(i + 1) + " has unparsable prices");
        }
        pair.dates.push_back(Date::parse(fields[0]));
        pair.prices_a.push_back(*a);
        pair.prices_b.push_back(*b);
    }
    if (pair.dates.empty()) {
        throw EmptyInputError("aligned CSV contains no data rows");
    }
    return pair;
}

}  // namespace deepspread
