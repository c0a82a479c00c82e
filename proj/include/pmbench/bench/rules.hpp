#pragma once

// Mechanistic rule policy: alarm when any failure mechanism breaches its
// threshold (tool-wear band, heat-dissipation conjunction, power window,
// per-type overstrain cap). Thresholds are tuned by seeded random search
// minimizing training cost: a global phase samples uniformly from the
// observed training ranges, then a local phase resamples coordinates
// around the incumbent with a shrinking radius (plain uniform draws cannot
// land nine tight thresholds at once). Candidates that never clear a
// single machine (no true negative) are rejected so the degenerate
// always-alarm policy cannot win on a cost technicality.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "pmbench/causal/features.hpp"
#include "pmbench/costmodel.hpp"
#include "pmbench/data.hpp"
#include "pmbench/errors.hpp"
#include "pmbench/rng.hpp"

namespace pmbench {

struct RuleModel {
    double wear_low = 0.0;
    double wear_high = 0.0;
    double hdf_temp_diff_max = 0.0;
    double hdf_rpm_max = 0.0;
    double power_min = 0.0;
    double power_max = 0.0;
    std::array<double, 3> overstrain_max{0.0, 0.0, 0.0};  // indexed by MachineType

    bool fires(const MachineRecord& r) const {
        const CausalFeatures f = derive_causal_features(r);
        if (r.tool_wear >= wear_low && r.tool_wear <= wear_high) return true;
        if (f.temp_diff < hdf_temp_diff_max && r.rot_speed < hdf_rpm_max) return true;
        if (f.power < power_min || f.power > power_max) return true;
        if (f.overstrain > overstrain_max[static_cast<int>(r.machine_type)]) return true;
        return false;
    }
};

namespace detail {

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    bool valid() const { return lo <= hi; }
};

}  // namespace detail

inline RuleModel fit_rule_model(const std::vector<LabeledRecord>& train,
                                const CostSchedule& schedule, int budget, std::uint64_t seed) {
    if (budget < 1) throw ConfigError("rule search budget must be at least 1");
    if (train.empty()) throw NumericError("rule search needs training data");

    struct Row {
        double wear, temp_diff, rpm, power, overstrain;
        int type;
        int label;
    };
    std::vector<Row> rows;
    rows.reserve(train.size());
    detail::Range wear_r, td_r, rpm_r, power_r, over_all;
    std::array<detail::Range, 3> over_r;
    for (const auto& lr : train) {
        const CausalFeatures f = derive_causal_features(lr.record);
        rows.push_back({lr.record.tool_wear, f.temp_diff, lr.record.rot_speed, f.power,
                        f.overstrain, static_cast<int>(lr.record.machine_type),
                        lr.label ? 1 : 0});
        wear_r.include(lr.record.tool_wear);
        td_r.include(f.temp_diff);
        rpm_r.include(lr.record.rot_speed);
        power_r.include(f.power);
        over_all.include(f.overstrain);
        over_r[static_cast<int>(lr.record.machine_type)].include(f.overstrain);
    }
    for (auto& r : over_r) {
        if (!r.valid()) r = over_all;  // machine type absent from train
    }

    const auto evaluate = [&](const RuleModel& m) -> std::pair<bool, std::int64_t> {
        ConfusionCounts c;
        for (const auto& row : rows) {
            bool fire = (row.wear >= m.wear_low && row.wear <= m.wear_high) ||
                        (row.temp_diff < m.hdf_temp_diff_max && row.rpm < m.hdf_rpm_max) ||
                        (row.power < m.power_min || row.power > m.power_max) ||
                        (row.overstrain > m.overstrain_max[row.type]);
            if (fire) {
                (row.label ? c.tp : c.fp) += 1;
            } else {
                (row.label ? c.fn : c.tn) += 1;
            }
        }
        if (c.tn < 1) return {false, 0};  // degenerate always-alarm candidate
        return {true, total_cost(c, schedule)};
    };

    Rng rng(seed);
    bool found = false;
    RuleModel best;
    std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();

    const int global_budget = std::max(1, budget / 4);
    for (int candidate = 0; candidate < global_budget; ++candidate) {
        RuleModel m;
        const double w1 = rng.uniform(wear_r.lo, wear_r.hi);
        const double w2 = rng.uniform(wear_r.lo, wear_r.hi);
        m.wear_low = std::min(w1, w2);
        m.wear_high = std::max(w1, w2);
        m.hdf_temp_diff_max = rng.uniform(td_r.lo, td_r.hi);
        m.hdf_rpm_max = rng.uniform(rpm_r.lo, rpm_r.hi);
        const double p1 = rng.uniform(power_r.lo, power_r.hi);
        const double p2 = rng.uniform(power_r.lo, power_r.hi);
        m.power_min = std::min(p1, p2);
        m.power_max = std::max(p1, p2);
        for (int t = 0; t < 3; ++t) m.overstrain_max[t] = rng.uniform(over_r[t].lo, over_r[t].hi);

        const auto [valid, cost] = evaluate(m);
        if (valid && cost < best_cost) {
            best_cost = cost;
            best = m;
            found = true;
        }
    }
    if (!found) {
        throw NumericError("rule search found no candidate with at least one true negative");
    }

    // Local phase around the incumbent: mostly coordinate jitter with a
    // shrinking radius, plus occasional block moves that redraw one whole
    // mechanism's parameters (a band needs both endpoints to move at once
    // before it pays off, which jitter alone cannot do).
    const int local_budget = budget - global_budget;
    const auto clamp = [](double v, const detail::Range& r) {
        return std::min(std::max(v, r.lo), r.hi);
    };
    for (int candidate = 0; candidate < local_budget; ++candidate) {
        const double progress =
            local_budget > 1 ? static_cast<double>(candidate) / (local_budget - 1) : 0.0;
        const double radius = 0.25 * std::pow(0.02 / 0.25, progress);
        RuleModel m = best;
        if (rng.uniform01() < 0.3) {
            switch (rng.below(4)) {
                case 0: {
                    const double w1 = rng.uniform(wear_r.lo, wear_r.hi);
                    const double w2 = rng.uniform(wear_r.lo, wear_r.hi);
                    m.wear_low = std::min(w1, w2);
                    m.wear_high = std::max(w1, w2);
                    break;
                }
                case 1: {
                    const double p1 = rng.uniform(power_r.lo, power_r.hi);
                    const double p2 = rng.uniform(power_r.lo, power_r.hi);
                    m.power_min = std::min(p1, p2);
                    m.power_max = std::max(p1, p2);
                    break;
                }
                case 2:
                    m.hdf_temp_diff_max = rng.uniform(td_r.lo, td_r.hi);
                    m.hdf_rpm_max = rng.uniform(rpm_r.lo, rpm_r.hi);
                    break;
                default:
                    for (int t = 0; t < 3; ++t) {
                        m.overstrain_max[t] = rng.uniform(over_r[t].lo, over_r[t].hi);
                    }
                    break;
            }
        } else {
            const auto jitter = [&](double v, const detail::Range& r) {
                if (rng.uniform01() < 0.5) return v;
                return clamp(v + radius * (r.hi - r.lo) * rng.normal(), r);
            };
            m.wear_low = jitter(m.wear_low, wear_r);
            m.wear_high = jitter(m.wear_high, wear_r);
            if (m.wear_low > m.wear_high) std::swap(m.wear_low, m.wear_high);
            m.hdf_temp_diff_max = jitter(m.hdf_temp_diff_max, td_r);
            m.hdf_rpm_max = jitter(m.hdf_rpm_max, rpm_r);
            m.power_min = jitter(m.power_min, power_r);
            m.power_max = jitter(m.power_max, power_r);
            if (m.power_min > m.power_max) std::swap(m.power_min, m.power_max);
            for (int t = 0; t < 3; ++t) m.overstrain_max[t] = jitter(m.overstrain_max[t], over_r[t]);
        }

        const auto [valid, cost] = evaluate(m);
        if (valid && cost < best_cost) {
            best_cost = cost;
            best = m;
        }
    }
    return best;
}

}  // namespace pmbench
