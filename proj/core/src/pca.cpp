#include "deepspread/pca.hpp"

#include <cmath>

#include "deepspread/errors.hpp"

namespace deepspread {

namespace {

struct Moments {
    double mean = 0.0;
    double stddev = 0.0;
};

Moments population_moments(const std::vector<double>& xs) {
    Moments m;
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) {
        const double d = x - m.mean;
        ss += d * d;
    }
    m.stddev = std::sqrt(ss / static_cast<double>(xs.size()));
    return m;
}

}  // namespace

Standardizer fit_standardizer(const AlignedPair& train_pair) {
    if (train_pair.size() < 2) {
        throw InsufficientDataError("standardizer needs at least 2 rows, got " +
                                    std::to_string(train_pair.size()));
    }
    const auto ma = population_moments(train_pair.prices_a);
    const auto mb = population_moments(train_pair.prices_b);
    if (ma.stddev == 0.0 || mb.stddev == 0.0) {
        throw DegenerateDataError("a leg has zero variance; cannot standardize");
    }
    return Standardizer{ma.mean, mb.mean, ma.stddev, mb.stddev};
}

AlignedPair standardize(const AlignedPair& pair, const Standardizer& stats) {
    AlignedPair out = pair;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.prices_a[i] = (pair.prices_a[i] - stats.mean_a) / stats.std_a;
        out.prices_b[i] = (pair.prices_b[i] - stats.mean_b) / stats.std_b;
    }
    return out;
}

PcaResult pca_2d(const AlignedPair& standardized_pair) {
    if (standardized_pair.size() < 2) {
        throw InsufficientDataError("PCA needs at least 2 rows, got " +
                                    std::to_string(standardized_pair.size()));
    }
    const auto n = static_cast<double>(standardized_pair.size());
    const auto ma = population_moments(standardized_pair.prices_a);
    const auto mb = population_moments(standardized_pair.prices_b);
    double sxy = 0.0;
    for (std::size_t i = 0; i < standardized_pair.size(); ++i) {
        sxy += (standardized_pair.prices_a[i] - ma.mean) * (standardized_pair.prices_b[i] - mb.mean);
    }
    sxy /= n;
    const double sxx = ma.stddev * ma.stddev;
    const double syy = mb.stddev * mb.stddev;
    if (!std::isfinite(sxx) || !std::isfinite(syy) || !std::isfinite(sxy)) {
        throw NumericError("covariance matrix has non-finite entries");
    }

    // Closed-form eigenvalues of [[sxx, sxy], [sxy, syy]].
    const double mean_eig = (sxx + syy) / 2.0;
    const double half_gap = (sxx - syy) / 2.0;
    const double radius = std::sqrt(half_gap * half_gap + sxy * sxy);
    const double lambda1 = mean_eig + radius;
    const double lambda2 = mean_eig - radius;

    Eigen::Vector2d v1;
    if (radius == 0.0) {
        // Isotropic covariance: any orthonormal basis works; use the axes.
        v1 = Eigen::Vector2d(1.0, 0.0);
    } else {
        // (A - lambda1 I) v = 0 has two candidate row solutions; pick the one
        // with the larger norm for stability.
        const Eigen::Vector2d cand1(sxy, lambda1 - sxx);
        const Eigen::Vector2d cand2(lambda1 - syy, sxy);
        v1 = cand1.squaredNorm() >= cand2.squaredNorm() ? cand1 : cand2;
        v1.normalize();
    }
    // Exact orthogonal complement, then fix signs: first nonzero entry >= 0.
    Eigen::Vector2d v2(-v1.y(), v1.x());
    auto fix_sign = [](Eigen::Vector2d& v) {
        if (v.x() < 0.0 || (v.x() == 0.0 && v.y() < 0.0)) v = -v;
    };
    fix_sign(v1);
    fix_sign(v2);

    PcaResult result;
    result.loadings.row(0) = v1.transpose();
    result.loadings.row(1) = v2.transpose();
    const double total = lambda1 + lambda2;
    if (total <= 0.0) {
        throw DegenerateDataError("total variance is zero; PCA is undefined");
    }
    result.explained_variance_ratio << lambda1 / total, lambda2 / total;
    return result;
}

PortfolioSeries portfolio_price(const AlignedPair& pair, const Eigen::Vector2d& loadings_pc2,
                                const Standardizer* standardizer) {
    PortfolioSeries series;
    series.dates = pair.dates;
    series.prices.resize(pair.size());
    for (std::size_t i = 0; i < pair.size(); ++i) {
        double a = pair.prices_a[i];
        double b = pair.prices_b[i];
        if (standardizer != nullptr) {
            a = (a - standardizer->mean_a) / standardizer->std_a;
            b = (b - standardizer->mean_b) / standardizer->std_b;
        }
        series.prices[i] = loadings_pc2.x() * a + loadings_pc2.y() * b;
    }
    return series;
}

VarianceCheck explained_variance_check(const PcaResult& result, double threshold) {
    VarianceCheck check;
    check.threshold = threshold;
    check.ratio_first = result.explained_variance_ratio(0);
    check.ratio_second = result.explained_variance_ratio(1);
    check.passed = check.ratio_first >= threshold;
    return check;
}

}  // namespace deepspread
