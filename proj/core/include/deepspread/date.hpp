#pragma once

#include <compare>
#include <string>
#include <vector>

namespace deepspread {

/// Calendar date. Comparison is lexicographic on (year, month, day).
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    bool valid() const;

    /// ISO-8601 "YYYY-MM-DD".
    std::string to_string() const;

    /// Parse with an strptime-like format string supporting %Y, %m, %d and
    /// literal separators, e.g. "%Y-%m-%d" or "%m/%d/%Y".
    /// Throws FormatError on mismatch or an impossible calendar date.
    static Date parse(const std::string& text, const std::string& format = "%Y-%m-%d");
};

/// Inclusive date interval [first, last].
struct DateInterval {
    Date first;
    Date last;

    bool contains(const Date& d) const { return first <= d && d <= last; }

    /// Parse "YYYY-MM-DD..YYYY-MM-DD".
    static DateInterval parse(const std::string& text);
};

bool is_leap_year(int year);
int days_in_month(int year, int month);

}  // namespace deepspread
