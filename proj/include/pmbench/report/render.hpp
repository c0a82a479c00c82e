#pragma once

// Human- and machine-readable views of a benchmark report. Every number
// rendered here comes straight from the stored report; the only arithmetic
// is display rounding (costs as integers, percentages to 1 decimal, ratios
// to 3 decimals).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmbench/bench/runner.hpp"

namespace pmbench {

namespace detail {

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

inline std::string usd(double v) {
    const long long i = std::llround(v);
    std::string digits = std::to_string(i < 0 ? -i : i);
    std::string grouped;
    int count = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (count > 0 && count % 3 == 0) grouped.push_back(',');
        grouped.push_back(*it);
        ++count;
    }
    std::reverse(grouped.begin(), grouped.end());
    return (i < 0 ? "-" : "") + grouped;
}

inline std::string pct1(double ratio) { return fmt("%.1f%%", 100.0 * ratio); }
inline std::string ratio3(double v) { return fmt("%.3f", v); }
inline std::string mean1(double v) { return fmt("%.1f", v); }

// shortest decimal that round-trips (for CSV numeric cells)
inline std::string num(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

inline std::string pad(const std::string& s, std::size_t width, bool right = true) {
    if (s.size() >= width) return s;
    const std::string fill(width - s.size(), ' ');
    return right ? fill + s : s + fill;
}

inline std::string render_table(const std::vector<std::string>& header,
                                const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size(), 0);
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    auto emit_row = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out += "  ";
            out += pad(row[c], width[c], c != 0);  // first column left-aligned
        }
        out += '\n';
    };
    emit_row(header);
    std::size_t total = 0;
    for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c > 0 ? 2 : 0);
    out += std::string(total, '-');
    out += '\n';
    for (const auto& row : rows) emit_row(row);
    return out;
}

}  // namespace detail

inline std::string render_performance_text(const BenchmarkReport& report) {
    using namespace detail;
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : report.summaries) {
        if (s.seeds_used == 0) {
            rows.push_back({pipeline_label(s.pipeline), "failed", "-", "-", "-", "-", "-", "-",
                            "-", "-"});
            continue;
        }
        rows.push_back({pipeline_label(s.pipeline), usd(s.mean_total_cost),
                        usd(s.mean_savings_usd), pct1(s.mean_savings_pct), pct1(s.mean_recall),
                        pct1(s.mean_precision), ratio3(s.mean_f1), mean1(s.mean_tp),
                        mean1(s.mean_fp), mean1(s.mean_fn)});
    }
    std::string out = "Model performance, costs, and savings (test means over " +
                      std::to_string(report.config.seeds.size()) + " seed(s))\n\n";
    out += render_table({"Model", "Total Cost [USD]", "Savings [USD]", "Savings %", "Recall",
                         "Precision", "F1", "TP", "FP", "FN"},
                        rows);
    return out;
}

inline std::string render_performance_csv(const BenchmarkReport& report) {
    using namespace detail;
    std::string out =
        "model,seeds_used,total_cost_usd,savings_usd,savings_pct,recall,precision,f1,tp,fp,fn\n";
    for (const auto& s : report.summaries) {
        out += std::string(pipeline_code(s.pipeline)) + "," + std::to_string(s.seeds_used) + "," +
               num(s.mean_total_cost) + "," + num(s.mean_savings_usd) + "," +
               num(s.mean_savings_pct) + "," + num(s.mean_recall) + "," + num(s.mean_precision) +
               "," + num(s.mean_f1) + "," + num(s.mean_tp) + "," + num(s.mean_fp) + "," +
               num(s.mean_fn) + "\n";
    }
    return out;
}

inline std::string render_performance_json(const BenchmarkReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : report.summaries) {
        rows.push_back({{"model", pipeline_code(s.pipeline)},
                        {"seeds_used", s.seeds_used},
                        {"total_cost_usd", s.mean_total_cost},
                        {"savings_usd", s.mean_savings_usd},
                        {"savings_pct", s.mean_savings_pct},
                        {"recall", s.mean_recall},
                        {"precision", s.mean_precision},
                        {"f1", s.mean_f1},
                        {"tp", s.mean_tp},
                        {"fp", s.mean_fp},
                        {"fn", s.mean_fn}});
    }
    return rows.dump(2) + "\n";
}

inline std::string render_generalization_text(const BenchmarkReport& report) {
    using namespace detail;
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : report.summaries) {
        if (s.pipeline == PipelineId::L0) continue;  // no learning, no gap to report
        if (s.seeds_used == 0) {
            rows.push_back({pipeline_label(s.pipeline), "failed", "-", "-"});
            continue;
        }
        rows.push_back({pipeline_label(s.pipeline), pct1(s.mean_train_savings_pct),
                        pct1(s.mean_savings_pct), fmt("%.2f", s.mean_gap_pp)});
    }
    std::string out = "Train-test savings comparison (means over " +
                      std::to_string(report.config.seeds.size()) + " seed(s))\n\n";
    out += render_table({"Model", "Train Savings %", "Test Savings %", "Gap (pp)"}, rows);
    return out;
}

inline std::string render_generalization_csv(const BenchmarkReport& report) {
    using namespace detail;
    std::string out = "model,seeds_used,train_savings_pct,test_savings_pct,gap_pp\n";
    for (const auto& s : report.summaries) {
        if (s.pipeline == PipelineId::L0) continue;
        out += std::string(pipeline_code(s.pipeline)) + "," + std::to_string(s.seeds_used) + "," +
               num(s.mean_train_savings_pct) + "," + num(s.mean_savings_pct) + "," +
               num(s.mean_gap_pp) + "\n";
    }
    return out;
}

inline std::string render_generalization_json(const BenchmarkReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : report.summaries) {
        if (s.pipeline == PipelineId::L0) continue;
        rows.push_back({{"model", pipeline_code(s.pipeline)},
                        {"seeds_used", s.seeds_used},
                        {"train_savings_pct", s.mean_train_savings_pct},
                        {"test_savings_pct", s.mean_savings_pct},
                        {"gap_pp", s.mean_gap_pp}});
    }
    return rows.dump(2) + "\n";
}

inline std::string render_causal_insights_text(const BenchmarkReport& report) {
    using namespace detail;
    std::string out = "Causal insights: backdoor adjustment sets and adjusted effect estimates\n";
    out += "(linear effect of each treatment on failure, estimated on each seed's train split)\n\n";
    bool any = false;
    for (const auto& c : report.cells) {
        if (c.pipeline != PipelineId::L5 || !c.ok || c.diagnostics.insights.empty()) continue;
        any = true;
        out += "seed " + std::to_string(c.seed) + ":\n";
        for (const auto& ins : c.diagnostics.insights) {
            out += "  " + ins.treatment + " -> failure: ";
            if (!ins.identified) {
                out += "not identifiable by backdoor adjustment\n";
                continue;
            }
            std::string z = "{";
            for (std::size_t i = 0; i < ins.adjustment.size(); ++i) {
                if (i > 0) z += ", ";
                z += ins.adjustment[i];
            }
            z += "}";
            out += "adjustment " + z + ", coefficient " + fmt("%.6g", ins.coefficient) +
                   " (se " + fmt("%.3g", ins.std_error) + ")\n";
        }
    }
    if (!any) {
        out += "no causal pipeline (L5) results in this run\n";
    }
    out += "\ndag digest: " + report.config.dag_digest + " (" + report.config.dag_source + ")\n";
    return out;
}

}  // namespace pmbench
