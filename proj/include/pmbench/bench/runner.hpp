#pragma once

// Multi-seed experiment driver: per seed, shuffle+split the labeled
// dataset, fit every requested pipeline on the train side, evaluate on
// both sides, then average per-pipeline results across seeds. A failing
// (pipeline, seed) cell is recorded and skipped; the other cells proceed.

#include <cstdint>
#include <string>
#include <vector>

#include "pmbench/bench/pipeline.hpp"
#include "pmbench/costmodel.hpp"
#include "pmbench/data.hpp"
#include "pmbench/errors.hpp"

namespace pmbench {

namespace detail {

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

}  // namespace detail

struct SideResult {
    ConfusionCounts counts;
    EvaluationMetrics metrics;
    std::int64_t baseline = 0;
};

struct SeedResult {
    PipelineId pipeline = PipelineId::L0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    double threshold = 0.5;
    bool uses_threshold = false;
    SideResult train;
    SideResult test;
    double gap_pp = 0.0;  // train minus test savings, percentage points
    PipelineDiagnostics diagnostics;
};

struct PipelineSummary {
    PipelineId pipeline = PipelineId::L0;
    int seeds_used = 0;
    double mean_total_cost = 0.0;
    double mean_savings_usd = 0.0;
    double mean_savings_pct = 0.0;  // ratio
    double mean_recall = 0.0;
    double mean_precision = 0.0;
    double mean_f1 = 0.0;
    double mean_tp = 0.0;
    double mean_fp = 0.0;
    double mean_fn = 0.0;
    double mean_tn = 0.0;
    double mean_train_savings_pct = 0.0;  // ratio
    double mean_gap_pp = 0.0;
};

struct ConfigEcho {
    std::string dataset;
    std::vector<std::uint64_t> seeds;
    std::vector<PipelineId> pipelines;
    CostSchedule schedule;
    double test_fraction = 0.20;
    LogisticConfig logistic;
    TreeConstraints tree;
    GbmConfig gbm;
    PosteriorConfig posterior;
    int rule_budget = 2000;
    ThresholdGrid grid;
    std::string dag_source;
    std::string dag_digest;
    std::string dag_edges;
    std::string rng = kRngAlgorithm;
};

struct BenchmarkReport {
    ConfigEcho config;
    std::vector<SeedResult> cells;      // ordered by (seed, pipeline)
    std::vector<PipelineSummary> summaries;  // ordered by requested pipeline list

    bool has_errors() const {
        for (const auto& c : cells) {
            if (!c.ok) return true;
        }
        return false;
    }
};

inline std::vector<PipelineSummary> summarize_cells(const std::vector<SeedResult>& cells,
                                                    const std::vector<PipelineId>& pipelines) {
    std::vector<PipelineSummary> out;
    for (PipelineId id : pipelines) {
        PipelineSummary s;
        s.pipeline = id;
        for (const auto& c : cells) {
            if (c.pipeline != id || !c.ok) continue;
            ++s.seeds_used;
            s.mean_total_cost += static_cast<double>(c.test.metrics.total_cost);
            s.mean_savings_usd += static_cast<double>(c.test.metrics.savings_usd);
            s.mean_savings_pct += c.test.metrics.savings_pct;
            s.mean_recall += c.test.metrics.recall;
            s.mean_precision += c.test.metrics.precision;
            s.mean_f1 += c.test.metrics.f1;
            s.mean_tp += static_cast<double>(c.test.counts.tp);
            s.mean_fp += static_cast<double>(c.test.counts.fp);
            s.mean_fn += static_cast<double>(c.test.counts.fn);
            s.mean_tn += static_cast<double>(c.test.counts.tn);
            s.mean_train_savings_pct += c.train.metrics.savings_pct;
            s.mean_gap_pp += c.gap_pp;
        }
        if (s.seeds_used > 0) {
            const double k = static_cast<double>(s.seeds_used);
            s.mean_total_cost /= k;
            s.mean_savings_usd /= k;
            s.mean_savings_pct /= k;
            s.mean_recall /= k;
            s.mean_precision /= k;
            s.mean_f1 /= k;
            s.mean_tp /= k;
            s.mean_fp /= k;
            s.mean_fn /= k;
            s.mean_tn /= k;
            s.mean_train_savings_pct /= k;
            s.mean_gap_pp /= k;
        }
        out.push_back(s);
    }
    return out;
}

inline BenchmarkReport run_benchmark(const std::vector<LabeledRecord>& data,
                                     const std::vector<PipelineId>& pipelines,
                                     const std::vector<std::uint64_t>& seeds,
                                     const BenchConfig& cfg) {
    if (pipelines.empty()) throw ConfigError("at least one pipeline is required");
    if (seeds.empty()) throw ConfigError("at least one seed is required");

    BenchmarkReport report;
    report.config.seeds = seeds;
    report.config.pipelines = pipelines;
    report.config.schedule = cfg.schedule;
    report.config.test_fraction = cfg.test_fraction;
    report.config.logistic = cfg.logistic;
    report.config.tree = cfg.tree;
    report.config.gbm = cfg.gbm;
    report.config.posterior = cfg.posterior;
    report.config.rule_budget = cfg.rule_budget;
    report.config.grid = cfg.grid;
    report.config.dag_source = cfg.dag_source;
    report.config.dag_edges = cfg.dag.to_edge_list();
    report.config.dag_digest = detail::hex64(detail::fnv1a64(report.config.dag_edges));

    for (std::uint64_t seed : seeds) {
        const DataSplit split = stratified_split(data, SplitSpec{cfg.test_fraction, seed});
        std::int64_t train_pos = 0, test_pos = 0;
        for (const auto& lr : split.train) train_pos += lr.label ? 1 : 0;
        for (const auto& lr : split.test) test_pos += lr.label ? 1 : 0;
        const std::int64_t train_baseline = baseline_cost(train_pos, cfg.schedule);
        const std::int64_t test_baseline = baseline_cost(test_pos, cfg.schedule);

        for (PipelineId id : pipelines) {
            SeedResult cell;
            cell.pipeline = id;
            cell.seed = seed;
            try {
                const FittedPipeline fitted = fit_pipeline(id, split.train, seed, cfg);
                cell.threshold = fitted.threshold;
                cell.uses_threshold = fitted.uses_threshold;
                cell.diagnostics = fitted.diagnostics;
                const PipelineEvaluation train_eval =
                    evaluate_pipeline(fitted, split.train, cfg.schedule, train_baseline);
                const PipelineEvaluation test_eval =
                    evaluate_pipeline(fitted, split.test, cfg.schedule, test_baseline);
                cell.train = {train_eval.counts, train_eval.metrics, train_baseline};
                cell.test = {test_eval.counts, test_eval.metrics, test_baseline};
                cell.gap_pp = generalization_gap(100.0 * train_eval.metrics.savings_pct,
                                                 100.0 * test_eval.metrics.savings_pct);
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.ok = false;
                cell.error = e.what();
            }
            report.cells.push_back(std::move(cell));
        }
    }
    report.summaries = summarize_cells(report.cells, pipelines);
    return report;
}

}  // namespace pmbench
