#pragma once

// Machine-readable dump of a benchmark report (results.json) and its
// loader. The dump carries every per-seed result plus the full config
// echo, holds no timestamps, and serializes with sorted keys, so repeated
// runs with identical inputs produce byte-identical files. A format
// version gate rejects dumps written by an incompatible layout.

#include <string>
#include <vector>

#include <json.hpp>

#include "pmbench/bench/runner.hpp"
#include "pmbench/errors.hpp"

namespace pmbench {

inline constexpr int kDumpFormatVersion = 1;

namespace detail {

using json = nlohmann::json;

inline json counts_to_json(const ConfusionCounts& c) {
    return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
}

inline ConfusionCounts counts_from_json(const json& j) {
    return {j.at("tp").get<std::int64_t>(), j.at("fp").get<std::int64_t>(),
            j.at("fn").get<std::int64_t>(), j.at("tn").get<std::int64_t>()};
}

inline json metrics_to_json(const EvaluationMetrics& m) {
    return {{"total_cost", m.total_cost}, {"savings_usd", m.savings_usd},
            {"savings_pct", m.savings_pct}, {"recall", m.recall},
            {"precision", m.precision},     {"f1", m.f1}};
}

inline EvaluationMetrics metrics_from_json(const json& j) {
    EvaluationMetrics m;
    m.total_cost = j.at("total_cost").get<std::int64_t>();
    m.savings_usd = j.at("savings_usd").get<std::int64_t>();
    m.savings_pct = j.at("savings_pct").get<double>();
    m.recall = j.at("recall").get<double>();
    m.precision = j.at("precision").get<double>();
    m.f1 = j.at("f1").get<double>();
    return m;
}

inline json side_to_json(const SideResult& s) {
    return {{"counts", counts_to_json(s.counts)},
            {"metrics", metrics_to_json(s.metrics)},
            {"baseline", s.baseline}};
}

inline SideResult side_from_json(const json& j) {
    return {counts_from_json(j.at("counts")), metrics_from_json(j.at("metrics")),
            j.at("baseline").get<std::int64_t>()};
}

inline json rule_to_json(const RuleModel& r) {
    return {{"wear_low", r.wear_low},
            {"wear_high", r.wear_high},
            {"hdf_temp_diff_max", r.hdf_temp_diff_max},
            {"hdf_rpm_max", r.hdf_rpm_max},
            {"power_min", r.power_min},
            {"power_max", r.power_max},
            {"overstrain_max_L", r.overstrain_max[0]},
            {"overstrain_max_M", r.overstrain_max[1]},
            {"overstrain_max_H", r.overstrain_max[2]}};
}

inline RuleModel rule_from_json(const json& j) {
    RuleModel r;
    r.wear_low = j.at("wear_low").get<double>();
    r.wear_high = j.at("wear_high").get<double>();
    r.hdf_temp_diff_max = j.at("hdf_temp_diff_max").get<double>();
    r.hdf_rpm_max = j.at("hdf_rpm_max").get<double>();
    r.power_min = j.at("power_min").get<double>();
    r.power_max = j.at("power_max").get<double>();
    r.overstrain_max[0] = j.at("overstrain_max_L").get<double>();
    r.overstrain_max[1] = j.at("overstrain_max_M").get<double>();
    r.overstrain_max[2] = j.at("overstrain_max_H").get<double>();
    return r;
}

inline json diagnostics_to_json(const PipelineDiagnostics& d) {
    json j;
    j["scorer_converged"] = d.scorer_converged;
    j["optimizer_iterations"] = d.optimizer_iterations;
    j["final_gradient_norm"] = d.final_gradient_norm;
    j["r_hat"] = d.r_hat;
    j["chain_acceptance"] = d.chain_acceptance;
    j["mcmc_kernel"] = d.mcmc_kernel;
    j["gbm_loss_trace"] = d.gbm_loss_trace;
    if (d.rule) j["rule"] = rule_to_json(*d.rule);
    json insights = json::array();
    for (const auto& ins : d.insights) {
        insights.push_back({{"treatment", ins.treatment},
                            {"identified", ins.identified},
                            {"adjustment", ins.adjustment},
                            {"coefficient", ins.coefficient},
                            {"std_error", ins.std_error}});
    }
    j["insights"] = insights;
    j["note"] = d.note;
    return j;
}

inline PipelineDiagnostics diagnostics_from_json(const json& j) {
    PipelineDiagnostics d;
    d.scorer_converged = j.at("scorer_converged").get<bool>();
    d.optimizer_iterations = j.at("optimizer_iterations").get<int>();
    d.final_gradient_norm = j.at("final_gradient_norm").get<double>();
    d.r_hat = j.at("r_hat").get<std::vector<double>>();
    d.chain_acceptance = j.at("chain_acceptance").get<std::vector<double>>();
    d.mcmc_kernel = j.at("mcmc_kernel").get<std::string>();
    d.gbm_loss_trace = j.at("gbm_loss_trace").get<std::vector<double>>();
    if (j.contains("rule")) d.rule = rule_from_json(j.at("rule"));
    for (const auto& ij : j.at("insights")) {
        CausalInsight ins;
        ins.treatment = ij.at("treatment").get<std::string>();
        ins.identified = ij.at("identified").get<bool>();
        ins.adjustment = ij.at("adjustment").get<std::vector<std::string>>();
        ins.coefficient = ij.at("coefficient").get<double>();
        ins.std_error = ij.at("std_error").get<double>();
        d.insights.push_back(std::move(ins));
    }
    d.note = j.at("note").get<std::string>();
    return d;
}

inline PipelineId pipeline_from_code(const std::string& code) {
    const auto id = parse_pipeline_id(code);
    if (!id) throw ConfigError("unknown pipeline code \"" + code + "\" in dump");
    return *id;
}

}  // namespace detail

inline nlohmann::json report_to_json(const BenchmarkReport& report) {
    using detail::json;
    json j;
    j["format_version"] = kDumpFormatVersion;

    json cfg;
    const ConfigEcho& e = report.config;
    cfg["dataset"] = e.dataset;
    cfg["seeds"] = e.seeds;
    json pipeline_codes = json::array();
    for (PipelineId id : e.pipelines) pipeline_codes.push_back(pipeline_code(id));
    cfg["pipelines"] = pipeline_codes;
    cfg["cost_schedule"] = {{"tp_cost", e.schedule.tp_cost},
                            {"fp_cost", e.schedule.fp_cost},
                            {"fn_cost", e.schedule.fn_cost},
                            {"tn_cost", e.schedule.tn_cost}};
    cfg["test_fraction"] = e.test_fraction;
    cfg["logistic"] = {{"l2_penalty", e.logistic.l2_penalty},
                       {"max_iters", e.logistic.max_iters},
                       {"tolerance", e.logistic.tolerance}};
    cfg["tree"] = {{"max_depth", e.tree.max_depth},
                   {"min_samples_split", e.tree.min_samples_split},
                   {"min_samples_leaf", e.tree.min_samples_leaf}};
    cfg["gbm"] = {{"n_trees", e.gbm.n_trees},
                  {"learning_rate", e.gbm.learning_rate},
                  {"max_depth", e.gbm.max_depth},
                  {"min_samples_leaf", e.gbm.min_samples_leaf},
                  {"min_samples_split", e.gbm.min_samples_split}};
    cfg["posterior"] = {{"draws", e.posterior.draws},
                        {"tune", e.posterior.tune},
                        {"chains", e.posterior.chains},
                        {"prior_sd", e.posterior.prior_sd},
                        {"thin", e.posterior.thin},
                        {"target_accept", e.posterior.target_accept},
                        {"rhat_threshold", e.posterior.rhat_threshold}};
    cfg["rule_budget"] = e.rule_budget;
    cfg["threshold_grid"] = {{"start", e.grid.start}, {"stop", e.grid.stop}, {"step", e.grid.step}};
    cfg["dag_source"] = e.dag_source;
    cfg["dag_digest"] = e.dag_digest;
    cfg["dag_edges"] = e.dag_edges;
    cfg["rng"] = e.rng;
    j["config"] = cfg;

    json cells = json::array();
    for (const auto& c : report.cells) {
        json cj;
        cj["pipeline"] = pipeline_code(c.pipeline);
        cj["seed"] = c.seed;
        cj["ok"] = c.ok;
        if (!c.ok) cj["error"] = c.error;
        cj["threshold"] = c.threshold;
        cj["uses_threshold"] = c.uses_threshold;
        cj["train"] = detail::side_to_json(c.train);
        cj["test"] = detail::side_to_json(c.test);
        cj["gap_pp"] = c.gap_pp;
        cj["diagnostics"] = detail::diagnostics_to_json(c.diagnostics);
        cells.push_back(std::move(cj));
    }
    j["cells"] = cells;

    json summaries = json::array();
    for (const auto& s : report.summaries) {
        summaries.push_back({{"pipeline", pipeline_code(s.pipeline)},
                             {"seeds_used", s.seeds_used},
                             {"mean_total_cost", s.mean_total_cost},
                             {"mean_savings_usd", s.mean_savings_usd},
                             {"mean_savings_pct", s.mean_savings_pct},
                             {"mean_recall", s.mean_recall},
                             {"mean_precision", s.mean_precision},
                             {"mean_f1", s.mean_f1},
                             {"mean_tp", s.mean_tp},
                             {"mean_fp", s.mean_fp},
                             {"mean_fn", s.mean_fn},
                             {"mean_tn", s.mean_tn},
                             {"mean_train_savings_pct", s.mean_train_savings_pct},
                             {"mean_gap_pp", s.mean_gap_pp}});
    }
    j["summaries"] = summaries;
    return j;
}

inline std::string dump_report(const BenchmarkReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

inline BenchmarkReport report_from_json(const nlohmann::json& j) {
    using detail::json;
    if (!j.contains("format_version") ||
        j.at("format_version").get<int>() != kDumpFormatVersion) {
        const std::string got = j.contains("format_version")
                                    ? j.at("format_version").dump()
                                    : std::string("absent");
        throw ConfigError("incompatible dump: format_version " + got + ", expected " +
                          std::to_string(kDumpFormatVersion));
    }
    BenchmarkReport report;
    const json& cfg = j.at("config");
    ConfigEcho& e = report.config;
    e.dataset = cfg.at("dataset").get<std::string>();
    e.seeds = cfg.at("seeds").get<std::vector<std::uint64_t>>();
    for (const auto& code : cfg.at("pipelines")) {
        e.pipelines.push_back(detail::pipeline_from_code(code.get<std::string>()));
    }
    e.schedule.tp_cost = cfg.at("cost_schedule").at("tp_cost").get<std::int64_t>();
    e.schedule.fp_cost = cfg.at("cost_schedule").at("fp_cost").get<std::int64_t>();
    e.schedule.fn_cost = cfg.at("cost_schedule").at("fn_cost").get<std::int64_t>();
    e.schedule.tn_cost = cfg.at("cost_schedule").at("tn_cost").get<std::int64_t>();
    e.test_fraction = cfg.at("test_fraction").get<double>();
    e.logistic.l2_penalty = cfg.at("logistic").at("l2_penalty").get<double>();
    e.logistic.max_iters = cfg.at("logistic").at("max_iters").get<int>();
    e.logistic.tolerance = cfg.at("logistic").at("tolerance").get<double>();
    e.tree.max_depth = cfg.at("tree").at("max_depth").get<int>();
    e.tree.min_samples_split = cfg.at("tree").at("min_samples_split").get<int>();
    e.tree.min_samples_leaf = cfg.at("tree").at("min_samples_leaf").get<int>();
    e.gbm.n_trees = cfg.at("gbm").at("n_trees").get<int>();
    e.gbm.learning_rate = cfg.at("gbm").at("learning_rate").get<double>();
    e.gbm.max_depth = cfg.at("gbm").at("max_depth").get<int>();
    e.gbm.min_samples_leaf = cfg.at("gbm").at("min_samples_leaf").get<int>();
    e.gbm.min_samples_split = cfg.at("gbm").at("min_samples_split").get<int>();
    e.posterior.draws = cfg.at("posterior").at("draws").get<int>();
    e.posterior.tune = cfg.at("posterior").at("tune").get<int>();
    e.posterior.chains = cfg.at("posterior").at("chains").get<int>();
    e.posterior.prior_sd = cfg.at("posterior").at("prior_sd").get<double>();
    e.posterior.thin = cfg.at("posterior").at("thin").get<int>();
    e.posterior.target_accept = cfg.at("posterior").at("target_accept").get<double>();
    e.posterior.rhat_threshold = cfg.at("posterior").at("rhat_threshold").get<double>();
    e.rule_budget = cfg.at("rule_budget").get<int>();
    e.grid.start = cfg.at("threshold_grid").at("start").get<double>();
    e.grid.stop = cfg.at("threshold_grid").at("stop").get<double>();
    e.grid.step = cfg.at("threshold_grid").at("step").get<double>();
    e.dag_source = cfg.at("dag_source").get<std::string>();
    e.dag_digest = cfg.at("dag_digest").get<std::string>();
    e.dag_edges = cfg.at("dag_edges").get<std::string>();
    e.rng = cfg.at("rng").get<std::string>();

    for (const auto& cj : j.at("cells")) {
        SeedResult c;
        c.pipeline = detail::pipeline_from_code(cj.at("pipeline").get<std::string>());
        c.seed = cj.at("seed").get<std::uint64_t>();
        c.ok = cj.at("ok").get<bool>();
        if (cj.contains("error")) c.error = cj.at("error").get<std::string>();
        c.threshold = cj.at("threshold").get<double>();
        c.uses_threshold = cj.at("uses_threshold").get<bool>();
        c.train = detail::side_from_json(cj.at("train"));
        c.test = detail::side_from_json(cj.at("test"));
        c.gap_pp = cj.at("gap_pp").get<double>();
        c.diagnostics = detail::diagnostics_from_json(cj.at("diagnostics"));
        report.cells.push_back(std::move(c));
    }

    for (const auto& sj : j.at("summaries")) {
        PipelineSummary s;
        s.pipeline = detail::pipeline_from_code(sj.at("pipeline").get<std::string>());
        s.seeds_used = sj.at("seeds_used").get<int>();
        s.mean_total_cost = sj.at("mean_total_cost").get<double>();
        s.mean_savings_usd = sj.at("mean_savings_usd").get<double>();
        s.mean_savings_pct = sj.at("mean_savings_pct").get<double>();
        s.mean_recall = sj.at("mean_recall").get<double>();
        s.mean_precision = sj.at("mean_precision").get<double>();
        s.mean_f1 = sj.at("mean_f1").get<double>();
        s.mean_tp = sj.at("mean_tp").get<double>();
        s.mean_fp = sj.at("mean_fp").get<double>();
        s.mean_fn = sj.at("mean_fn").get<double>();
        s.mean_tn = sj.at("mean_tn").get<double>();
        s.mean_train_savings_pct = sj.at("mean_train_savings_pct").get<double>();
        s.mean_gap_pp = sj.at("mean_gap_pp").get<double>();
        report.summaries.push_back(std::move(s));
    }
    return report;
}

// Parses a dump, translating JSON syntax errors into ParseError with the
// byte offset and version mismatches into ConfigError.
inline BenchmarkReport load_report(const std::string& dump_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(dump_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("dump parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    try {
        return report_from_json(j);
    } catch (const ConfigError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("dump structure error: ") + e.what());
    }
}

}  // namespace pmbench
