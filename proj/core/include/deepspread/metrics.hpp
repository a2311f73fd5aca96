#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace deepspread {

/// Confusion counts with +1 ("up") as the positive class.
struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }
    double accuracy() const;
};

/// Per-direction precision and recall. A 0/0 ratio is reported as nullopt,
/// never coerced to zero.
struct DirectionalRates {
    std::optional<double> recall_up;       // tp / (tp + fn)
    std::optional<double> recall_down;     // tn / (tn + fp)
    std::optional<double> precision_up;    // tp / (tp + fp)
    std::optional<double> precision_down;  // tn / (tn + fn)
};

struct RocCurve {
    std::vector<std::pair<double, double>> points;  // (fpr, tpr), (0,0) .. (1,1)
    double auc = 0.0;
};

/// Throws ShapeError on length mismatch, EmptyInputError on empty input.
ConfusionCounts confusion(const std::vector<int>& predictions, const std::vector<int>& labels);

DirectionalRates precision_recall(const ConfusionCounts& counts);

/// Threshold sweep over distinct score values descending with ties grouped;
/// AUC by the trapezoidal rule (equals the Mann-Whitney statistic with ties
/// counted half). Throws DataError when only one class is present.
RocCurve roc(const std::vector<double>& scores, const std::vector<int>& labels);

}  // namespace deepspread
