#include "deepspread/date.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "deepspread/errors.hpp"

namespace deepspread {

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> days = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12) return 0;
    if (month == 2 && is_leap_year(year)) return 29;
    return days[month - 1];
}

bool Date::valid() const {
    return year >= 1 && month >= 1 && month <= 12 && day >= 1 && day <= days_in_month(year, month);
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

namespace {

// Reads 1..max_digits decimal digits starting at pos; advances pos.
bool read_number(const std::string& text, std::size_t& pos, int max_digits, int& out) {
    std::size_t end = pos;
    while (end < text.size() && end - pos < static_cast<std::size_t>(max_digits) &&
           text[end] >= '0' && text[end] <= '9') {
        ++end;
    }
    if (end == pos) return false;
    auto res = std::from_chars(text.data() + pos, text.data() + end, out);
    if (res.ec != std::errc{}) return false;
    pos = end;
    return true;
}

}  // namespace

Date Date::parse(const std::string& text, const std::string& format) {
    Date d;
    bool saw_y = false, saw_m = false, saw_d = false;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < format.size(); ++f) {
        if (format[f] == '%' && f + 1 < format.size()) {
            char spec = format[++f];
            bool ok = false;
            switch (spec) {
                case 'Y': ok = read_number(text, pos, 4, d.year); saw_y = ok; break;
                case 'm': ok = read_number(text, pos, 2, d.month); saw_m = ok; break;
                case 'd': ok = read_number(text, pos, 2, d.day); saw_d = ok; break;
                case '%': ok = pos < text.size() && text[pos++] == '%'; break;
                default:
                    throw FormatError("unsupported date format specifier %" + std::string(1, spec));
            }
            if (!ok) {
                throw FormatError("date '" + text + "' does not match format '" + format + "'");
            }
        } else {
            if (pos >= text.size() || text[pos] != format[f]) {
                throw FormatError("date '" + text + "' does not match format '" + format + "'");
            }
            ++pos;
        }
    }
    if (pos != text.size() || !saw_y || !saw_m || !saw_d) {
        throw FormatError("date '" + text + "' does not match format '" + format + "'");
    }
    if (!d.valid()) {
        throw FormatError("impossible calendar date '" + text + "'");
    }
    return d;
}

DateInterval DateInterval::parse(const std::string& text) {
    auto sep = text.find("..");
    if (sep == std::string::npos) {
        throw FormatError("date interval '" + text + "' is not of the form first..last");
    }
    DateInterval interval{Date::parse(text.substr(0, sep)), Date::parse(text.substr(sep + 2))};
    if (interval.last < interval.first) {
        throw FormatError("date interval '" + text + "' ends before it starts");
    }
    return interval;
}

}  // namespace deepspread
