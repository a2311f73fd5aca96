#pragma once

#include <cmath>

namespace deepspread {

/// Logistic function 1/(1+e^-x), stable for large |x|.
inline double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    double e = std::exp(x);
    return e / (1.0 + e);
}

/// log(sigmoid(x)) without overflow for large negative x.
inline double log_sigmoid(double x) {
    if (x >= 0.0) {
        return -std::log1p(std::exp(-x));
    }
    return x - std::log1p(std::exp(x));
}

}  // namespace deepspread
