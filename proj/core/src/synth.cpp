#include "deepspread/synth.hpp"

#include <cmath>
#include <random>

#include "deepspread/errors.hpp"
#include "deepspread/rng.hpp"

namespace deepspread {

void SynthConfig::validate() const {
    if (days < 1) throw ValidationError("days must be >= 1");
    if (!start_date.valid()) throw ValidationError("start date is not a valid calendar date");
    if (!(base_a > 0.0) || !(base_b > 0.0)) throw ValidationError("base prices must be positive");
    if (factor_vol < 0.0 || noise_vol < 0.0 || oc_spread_vol < 0.0 || hl_pad_vol < 0.0) {
        throw ValidationError("volatilities must be >= 0");
    }
    if (std::abs(noise_rho) >= 1.0) throw ValidationError("noise_rho must lie in (-1,1)");
}

namespace {

Date next_weekday(Date d) {
    // Zeller-style day-of-week; 0 = Saturday in this congruence.
    auto day_of_week = [](const Date& date) {
        int y = date.year, m = date.month;
        if (m < 3) {
            m += 12;
            --y;
        }
        const int k = y % 100, j = y / 100;
        return (date.day + 13 * (m + 1) / 5 + k + k / 4 + j / 4 + 5 * j) % 7;
    };
    do {
        ++d.day;
        if (d.day > days_in_month(d.year, d.month)) {
            d.day = 1;
            if (++d.month > 12) {
                d.month = 1;
                ++d.year;
            }
        }
    } while (day_of_week(d) == 0 || day_of_week(d) == 1);  // Saturday/Sunday
    return d;
}

}  // namespace

std::pair<DailyBarSeries, DailyBarSeries> generate_pair(const SynthConfig& config) {
    config.validate();

    Rng factor_rng = make_rng(config.seed, "synth.factor");
    Rng noise_a_rng = make_rng(config.seed, "synth.noise.a");
    Rng noise_b_rng = make_rng(config.seed, "synth.noise.b");
    Rng bar_rng = make_rng(config.seed, "synth.bars");
    std::normal_distribution<double> unit(0.0, 1.0);

    DailyBarSeries series_a{"SYNTH_A", {}};
    DailyBarSeries series_b{"SYNTH_B", {}};
    series_a.bars.reserve(static_cast<std::size_t>(config.days));
    series_b.bars.reserve(static_cast<std::size_t>(config.days));

    Date date = config.start_date;
    {
        // Ensure the first date is itself a weekday.
        Date before = date;
        --before.day;
        if (before.day < 1) {
            if (--before.month < 1) {
                before.month = 12;
                --before.year;
            }
            before.day = days_in_month(before.year, before.month);
        }
        date = next_weekday(before);
    }

    double factor = 0.0;
    double noise_a = 0.0, noise_b = 0.0;
    for (int t = 0; t < config.days; ++t) {
        factor += config.factor_vol * unit(factor_rng);
        noise_a = config.noise_rho * noise_a + config.noise_vol * unit(noise_a_rng);
        noise_b = config.noise_rho * noise_b + config.noise_vol * unit(noise_b_rng);

        const double mid_a = config.base_a + config.beta_a * factor + noise_a;
        const double mid_b = config.base_b + config.beta_b * factor + noise_b;

        auto make_bar = [&](double mid) {
            DailyBar bar;
            bar.date = date;
            // open = mid - delta, close = mid + delta keeps (open+close)/2 == mid.
            const double delta = config.oc_spread_vol * unit(bar_rng);
            bar.open = mid - delta;
            bar.close = mid + delta;
            const double pad_high = std::abs(config.hl_pad_vol * unit(bar_rng));
            const double pad_low = std::abs(config.hl_pad_vol * unit(bar_rng));
            bar.high = std::max(bar.open, bar.close) + pad_high;
            bar.low = std::min(bar.open, bar.close) - pad_low;
            std::uniform_int_distribution<std::int64_t> volume_dist(1000, 50000);
            bar.volume = volume_dist(bar_rng);
            bar.open_interest = volume_dist(bar_rng) * 4;
            return bar;
        };
        series_a.bars.push_back(make_bar(mid_a));
        series_b.bars.push_back(make_bar(mid_b));

        date = next_weekday(date);
    }
    return {std::move(series_a), std::move(series_b)};
}

}  // namespace deepspread
