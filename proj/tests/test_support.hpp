#pragma once

// Shared helpers and independent oracles for the test suites. Everything in
// here is deliberately written against the *definitions* (power iteration,
// pairwise ranking counts, finite differences) rather than reusing library
// code paths, so agreement is meaningful.

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace testsupport {

struct EigenPair {
    Eigen::Vector2d vector;
    double value = 0.0;
};

// Dominant eigenpair of a symmetric PSD 2x2 matrix by plain power iteration,
// run to a residual tolerance.
inline EigenPair power_dominant(const Eigen::Matrix2d& m, double tol = 1e-13,
                                int max_iters = 5000000) {
    Eigen::Vector2d v(0.8427316541, 0.5383310562);  // fixed, off-axis start
    double lambda = 0.0;
    for (int i = 0; i < max_iters; ++i) {
        Eigen::Vector2d mv = m * v;
        double norm = mv.norm();
        if (norm == 0.0) break;  // m annihilates v: eigenvalue 0 along v
        v = mv / norm;
        lambda = v.dot(m * v);
        if ((m * v - lambda * v).lpNorm<Eigen::Infinity>() <= tol * std::max(1.0, lambda)) {
            break;
        }
    }
    return {v, lambda};
}

// Both eigenpairs, descending by eigenvalue: power iteration plus deflation.
// When the deflated matrix is (numerically) zero the second eigenvector is
// taken as the orthogonal complement, which is exact in two dimensions.
inline std::pair<EigenPair, EigenPair> power_iteration_2x2(const Eigen::Matrix2d& m) {
    EigenPair first = power_dominant(m);
    Eigen::Matrix2d deflated = m - first.value * first.vector * first.vector.transpose();
    EigenPair second;
    if (deflated.lpNorm<Eigen::Infinity>() <= 1e-14 * std::max(1.0, first.value)) {
        second.vector = Eigen::Vector2d(-first.vector.y(), first.vector.x());
        second.value = second.vector.dot(m * second.vector);
    } else {
        second = power_dominant(deflated);
        second.value = second.vector.dot(m * second.vector);  // Rayleigh on the original
    }
    return {first, second};
}

// Max-norm distance between unit vectors up to sign.
inline double vector_distance_up_to_sign(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return std::min((a - b).lpNorm<Eigen::Infinity>(), (a + b).lpNorm<Eigen::Infinity>());
}

// Sample covariance (divisor n) of two equal-length series.
inline Eigen::Matrix2d sample_covariance(const std::vector<double>& a,
                                         const std::vector<double>& b) {
    const auto n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double saa = 0.0, sab = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sab += (a[i] - ma) * (b[i] - mb);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    Eigen::Matrix2d c;
    c << saa / n, sab / n, sab / n, sbb / n;
    return c;
}

// AUC as the plain Mann-Whitney pairwise statistic: for every
// (positive, negative) pair count a win for a higher positive score and half
// a win for a tie.
inline double brute_force_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0;
    long n_pos = 0, n_neg = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] == 1) {
            ++n_pos;
        } else {
            ++n_neg;
        }
    }
    if (n_pos == 0 || n_neg == 0) {
        throw std::runtime_error("brute_force_auc needs both classes");
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] == 1) continue;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    return wins / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

// Relative error between an analytic gradient and its finite-difference
// estimate, scaled by the larger norm.
inline double gradient_relative_error(const Eigen::VectorXd& analytic,
                                      const Eigen::VectorXd& numeric) {
    double scale = std::max({analytic.norm(), numeric.norm(), 1e-12});
    return (analytic - numeric).norm() / scale;
}

inline std::mt19937_64 test_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace testsupport
