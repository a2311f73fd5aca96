#include "deepspread/metrics.hpp"

#include <algorithm>
#include <string>

#include "deepspread/errors.hpp"

namespace deepspread {

double ConfusionCounts::accuracy() const {
    return static_cast<double>(tp + tn) / static_cast<double>(total());
}

ConfusionCounts confusion(const std::vector<int>& predictions, const std::vector<int>& labels) {
    if (predictions.size() != labels.size()) {
        throw ShapeError(std::to_string(predictions.size()) + " predictions vs " +
                         std::to_string(labels.size()) + " labels");
    }
    if (predictions.empty()) {
        throw EmptyInputError("confusion counts of an empty prediction list");
    }
    ConfusionCounts counts;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i] != 1 && predictions[i] != -1) {
            throw ValidationError("predictions must be +1 or -1");
        }
        if (labels[i] != 1 && labels[i] != -1) {
            throw ValidationError("labels must be +1 or -1");
        }
        if (labels[i] == 1) {
            (predictions[i] == 1 ? counts.tp : counts.fn) += 1;
        } else {
            (predictions[i] == -1 ? counts.tn : counts.fp) += 1;
        }
    }
    return counts;
}

DirectionalRates precision_recall(const ConfusionCounts& counts) {
    auto ratio = [](std::int64_t num, std::int64_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    DirectionalRates rates;
    rates.recall_up = ratio(counts.tp, counts.tp + counts.fn);
    rates.recall_down = ratio(counts.tn, counts.tn + counts.fp);
    rates.precision_up = ratio(counts.tp, counts.tp + counts.fp);
    rates.precision_down = ratio(counts.tn, counts.tn + counts.fn);
    return rates;
}

RocCurve roc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) {
        throw ShapeError(std::to_string(scores.size()) + " scores vs " +
                         std::to_string(labels.size()) + " labels");
    }
    if (scores.empty()) {
        throw EmptyInputError("ROC of an empty score list");
    }

    std::int64_t n_pos = 0, n_neg = 0;
    for (int label : labels) {
        if (label == 1) {
            ++n_pos;
        } else if (label == -1) {
            ++n_neg;
        } else {
            throw ValidationError("labels must be +1 or -1");
        }
    }
    if (n_pos == 0 || n_neg == 0) {
        throw DataError("ROC needs both classes present");
    }

    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.points.emplace_back(0.0, 0.0);
    std::int64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        // Group tied scores so the curve moves diagonally through ties.
        const double threshold = scores[order[i]];
        std::int64_t prev_tp = tp, prev_fp = fp;
        while (i < order.size() && scores[order[i]] == threshold) {
            (labels[order[i]] == 1 ? tp : fp) += 1;
            ++i;
        }
        const double fpr = static_cast<double>(fp) / static_cast<double>(n_neg);
        const double tpr = static_cast<double>(tp) / static_cast<double>(n_pos);
        curve.points.emplace_back(fpr, tpr);
        curve.auc += (static_cast<double>(fp - prev_fp) / static_cast<double>(n_neg)) *
                     (static_cast<double>(tp + prev_tp) / (2.0 * static_cast<double>(n_pos)));
    }
    return curve;
}

}  // namespace deepspread
