#pragma once

// Cost-minimizing decision-threshold search over a fixed probability grid.
// Ties break toward the smallest threshold: under the 50:1 cost asymmetry
// an equal-cost tie should favor recall.

#include <cstdint>
#include <vector>

#include "pmbench/costmodel.hpp"
#include "pmbench/errors.hpp"

namespace pmbench {

struct ThresholdGrid {
    double start = 0.01;
    double stop = 0.99;
    double step = 0.01;

    int points() const {
        return static_cast<int>((stop - start) / step + 0.5) + 1;
    }
    double at(int k) const { return start + step * k; }
};

inline ConfusionCounts counts_at_threshold(const std::vector<double>& scores,
                                           const std::vector<int>& labels, double threshold) {
    ConfusionCounts c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted = scores[i] >= threshold;
        if (predicted) {
            (labels[i] ? c.tp : c.fp) += 1;
        } else {
            (labels[i] ? c.fn : c.tn) += 1;
        }
    }
    return c;
}

inline double optimize_threshold(const std::vector<double>& scores,
                                 const std::vector<int>& labels, const CostSchedule& schedule,
                                 const ThresholdGrid& grid = {}) {
    if (scores.empty() || scores.size() != labels.size()) {
        throw NumericError("threshold search needs non-empty scores matching labels");
    }
    for (double s : scores) {
        if (!(s >= 0.0 && s <= 1.0)) {
            throw NumericError("threshold search scores must lie in [0,1]");
        }
    }
    double best_threshold = grid.at(0);
    std::int64_t best_cost = total_cost(counts_at_threshold(scores, labels, best_threshold), schedule);
    for (int k = 1; k < grid.points(); ++k) {
        const double t = grid.at(k);
        const std::int64_t cost = total_cost(counts_at_threshold(scores, labels, t), schedule);
        if (cost < best_cost) {
            best_cost = cost;
            best_threshold = t;
        }
    }
    return best_threshold;
}

}  // namespace pmbench
