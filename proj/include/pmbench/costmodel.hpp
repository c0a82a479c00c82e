#pragma once

// Business cost schedule, confusion accounting, and the classification
// metrics every pipeline is judged by. Currency is integer USD throughout;
// the schedule has no fractional cents, so cost arithmetic is exact.

#include <cstdint>
#include <stdexcept>

#include "pmbench/errors.hpp"

namespace pmbench {

struct CostSchedule {
    std::int64_t tp_cost = 5000;   // scheduled repair that prevents downtime
    std::int64_t fp_cost = 500;    // wasted inspection/parts
    std::int64_t fn_cost = 25000;  // emergency downtime plus repairs
    std::int64_t tn_cost = 0;      // normal production

    bool valid() const {
        return tp_cost >= 0 && fp_cost >= 0 && fn_cost >= 0 && tn_cost >= 0;
    }
};

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    std::int64_t positives() const { return tp + fn; }
    std::int64_t negatives() const { return fp + tn; }
    std::int64_t total() const { return tp + fp + fn + tn; }
};

struct EvaluationMetrics {
    std::int64_t total_cost = 0;
    std::int64_t savings_usd = 0;
    double savings_pct = 0.0;  // fraction of baseline, in [.., 1]
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
};

inline std::int64_t total_cost(const ConfusionCounts& c, const CostSchedule& s) {
    return c.tp * s.tp_cost + c.fp * s.fp_cost + c.fn * s.fn_cost + c.tn * s.tn_cost;
}

// Reactive-maintenance cost of predicting nothing: every actual failure
// pays the full emergency cost.
inline std::int64_t baseline_cost(std::int64_t positive_count, const CostSchedule& s) {
    return positive_count * s.fn_cost;
}

struct Savings {
    std::int64_t usd = 0;
    double pct = 0.0;
};

inline Savings savings(std::int64_t total, std::int64_t baseline) {
    if (baseline == 0) {
        throw NumericError("savings ratio undefined: baseline cost is zero");
    }
    Savings s;
    s.usd = baseline - total;
    s.pct = static_cast<double>(s.usd) / static_cast<double>(baseline);
    return s;
}

struct ClassificationMetrics {
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
};

// Zero denominators yield 0 (the no-skill model prints 0.0 for all three).
inline ClassificationMetrics classification_metrics(const ConfusionCounts& c) {
    ClassificationMetrics m;
    if (c.tp + c.fn > 0) m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    if (c.tp + c.fp > 0) m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    if (m.recall + m.precision > 0.0) m.f1 = 2.0 * m.recall * m.precision / (m.recall + m.precision);
    return m;
}

inline EvaluationMetrics evaluation_metrics(const ConfusionCounts& c,
                                            const CostSchedule& s,
                                            std::int64_t baseline) {
    EvaluationMetrics m;
    m.total_cost = total_cost(c, s);
    const Savings sv = savings(m.total_cost, baseline);
    m.savings_usd = sv.usd;
    m.savings_pct = sv.pct;
    const ClassificationMetrics cm = classification_metrics(c);
    m.recall = cm.recall;
    m.precision = cm.precision;
    m.f1 = cm.f1;
    return m;
}

}  // namespace pmbench
