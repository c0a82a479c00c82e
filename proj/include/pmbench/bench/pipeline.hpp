#pragma once

// The seven benchmark pipelines. Each fit produces a record-level
// probability scorer plus a decision threshold learned on training data
// only; evaluation is plain thresholding plus cost accounting.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pmbench/bench/rules.hpp"
#include "pmbench/bench/threshold.hpp"
#include "pmbench/causal/dag.hpp"
#include "pmbench/causal/effects.hpp"
#include "pmbench/causal/features.hpp"
#include "pmbench/causal/separation.hpp"
#include "pmbench/costmodel.hpp"
#include "pmbench/data.hpp"
#include "pmbench/errors.hpp"
#include "pmbench/learners/gbm.hpp"
#include "pmbench/learners/logistic.hpp"
#include "pmbench/learners/posterior.hpp"
#include "pmbench/learners/standardizer.hpp"
#include "pmbench/learners/tree.hpp"

namespace pmbench {

enum class PipelineId : int { L0 = 0, L1, L2, L3, L4, L5, L6 };

inline constexpr int kPipelineCount = 7;

inline const char* pipeline_code(PipelineId id) {
    static constexpr const char* codes[] = {"L0", "L1", "L2", "L3", "L4", "L5", "L6"};
    return codes[static_cast<int>(id)];
}

inline const char* pipeline_label(PipelineId id) {
    static constexpr const char* labels[] = {
        "L0: no-skill baseline",
        "L1: balanced logistic",
        "L2: cost-threshold logistic",
        "L3: cost-threshold tree",
        "L4: bayesian logistic",
        "L5: causal-feature gbm",
        "L6: mechanism rules"};
    return labels[static_cast<int>(id)];
}

inline std::optional<PipelineId> parse_pipeline_id(const std::string& code) {
    for (int i = 0; i < kPipelineCount; ++i) {
        if (code == pipeline_code(static_cast<PipelineId>(i))) {
            return static_cast<PipelineId>(i);
        }
    }
    return std::nullopt;
}

struct BenchConfig {
    CostSchedule schedule;
    double test_fraction = 0.20;
    LogisticConfig logistic;
    TreeConstraints tree;  // defaults are the tuned-tree constraints {5, 50, 20}
    GbmConfig gbm;
    PosteriorConfig posterior;
    int rule_budget = 2000;
    ThresholdGrid grid;
    Dag dag = build_default_dag();
    std::string dag_source = "builtin";
};

struct CausalInsight {
    std::string treatment;
    bool identified = false;
    std::vector<std::string> adjustment;
    double coefficient = 0.0;
    double std_error = 0.0;
};

struct PipelineDiagnostics {
    bool scorer_converged = true;
    int optimizer_iterations = 0;
    double final_gradient_norm = 0.0;
    std::vector<double> r_hat;
    std::vector<double> chain_acceptance;
    std::string mcmc_kernel;
    std::vector<double> gbm_loss_trace;
    std::optional<RuleModel> rule;
    std::vector<CausalInsight> insights;
    std::string note;
};

struct FittedPipeline {
    PipelineId id = PipelineId::L0;
    double threshold = 0.5;
    bool uses_threshold = false;  // false for the constant and rule policies
    std::function<double(const MachineRecord&)> scorer;
    PipelineDiagnostics diagnostics;

    bool predict(const MachineRecord& r) const {
        const double s = scorer(r);
        return uses_threshold ? s >= threshold : s >= 0.5;
    }
};

namespace detail {

inline Matrix raw_features(const std::vector<LabeledRecord>& data) {
    Matrix X;
    X.reserve(data.size());
    for (const auto& lr : data) X.push_back(featurize(lr.record));
    return X;
}

inline std::vector<double> causal_augmented_features(const MachineRecord& r) {
    std::vector<double> v = featurize(r);
    const CausalFeatures f = derive_causal_features(r);
    v.push_back(f.temp_diff);
    v.push_back(f.power);
    v.push_back(f.overstrain);
    return v;
}

inline std::vector<int> labels_of(const std::vector<LabeledRecord>& data) {
    std::vector<int> y;
    y.reserve(data.size());
    for (const auto& lr : data) y.push_back(lr.label ? 1 : 0);
    return y;
}

inline void require_both_classes(const std::vector<int>& y, PipelineId id) {
    std::size_t pos = 0;
    for (int v : y) pos += v ? 1 : 0;
    if (pos == 0 || pos == y.size()) {
        throw NumericError(std::string(pipeline_code(id)) +
                           " needs both classes in the training data");
    }
}

inline std::vector<double> score_all(const FittedPipeline& p,
                                     const std::vector<LabeledRecord>& data) {
    std::vector<double> s;
    s.reserve(data.size());
    for (const auto& lr : data) s.push_back(p.scorer(lr.record));
    return s;
}

inline std::vector<CausalInsight> causal_insights(const Dag& dag,
                                                  const std::vector<LabeledRecord>& train) {
    std::vector<CausalInsight> out;
    for (const std::string treatment : {"tool_wear", "torque", "rot_speed"}) {
        CausalInsight ins;
        ins.treatment = treatment;
        const auto z = find_minimal_adjustment_set(dag, treatment, "failure");
        if (z) {
            ins.identified = true;
            ins.adjustment.assign(z->begin(), z->end());
            const EffectEstimate est = estimate_effect(train, treatment, "failure", *z);
            ins.coefficient = est.coefficient;
            ins.std_error = est.std_error;
        }
        out.push_back(std::move(ins));
    }
    return out;
}

}  // namespace detail

inline FittedPipeline fit_pipeline(PipelineId id, const std::vector<LabeledRecord>& train,
                                   std::uint64_t seed, const BenchConfig& cfg = {}) {
    if (train.empty() && id != PipelineId::L0) {
        throw NumericError(std::string(pipeline_code(id)) + " needs training data");
    }

    FittedPipeline p;
    p.id = id;

    switch (id) {
        case PipelineId::L0: {
            p.scorer = [](const MachineRecord&) { return 0.0; };
            p.uses_threshold = false;
            p.threshold = 0.5;
            return p;
        }
        case PipelineId::L1:
        case PipelineId::L2: {
            const std::vector<int> y = detail::labels_of(train);
            detail::require_both_classes(y, id);
            const Matrix X = detail::raw_features(train);
            const Standardizer std_ = fit_standardizer(X);
            const ClassWeights cw = balanced_class_weights(y);
            LogisticModel model = fit_logistic(transform(std_, X), y, cw, cfg.logistic);
            p.diagnostics.scorer_converged = model.converged;
            p.diagnostics.optimizer_iterations = model.iterations;
            p.diagnostics.final_gradient_norm = model.final_gradient_norm;
            auto shared = std::make_shared<LogisticModel>(std::move(model));
            p.scorer = [std_, shared](const MachineRecord& r) {
                return shared->score(std_.transform_row(featurize(r)));
            };
            p.uses_threshold = true;
            if (id == PipelineId::L1) {
                p.threshold = 0.5;
            } else {
                p.threshold = optimize_threshold(detail::score_all(p, train), y, cfg.schedule,
                                                 cfg.grid);
                if (p.threshold > 0.5) {
                    p.diagnostics.note = "cost-optimized threshold above 0.5";
                }
            }
            return p;
        }
        case PipelineId::L3: {
            const std::vector<int> y = detail::labels_of(train);
            detail::require_both_classes(y, id);
            const Matrix X = detail::raw_features(train);
            auto tree = std::make_shared<TreeModel>(fit_tree(X, y, cfg.tree));
            p.scorer = [tree](const MachineRecord& r) { return tree->score(featurize(r)); };
            p.uses_threshold = true;
            p.threshold = optimize_threshold(detail::score_all(p, train), y, cfg.schedule, cfg.grid);
            return p;
        }
        case PipelineId::L4: {
            const std::vector<int> y = detail::labels_of(train);
            detail::require_both_classes(y, id);
            const Matrix X = detail::raw_features(train);
            const Standardizer std_ = fit_standardizer(X);
            PosteriorSamples samples = sample_posterior_logistic(
                transform(std_, X), y, cfg.posterior, derive_seed(seed, 4));
            p.diagnostics.scorer_converged = samples.converged;
            p.diagnostics.r_hat = samples.r_hat;
            p.diagnostics.chain_acceptance = samples.acceptance_rate;
            p.diagnostics.mcmc_kernel = samples.kernel;
            if (!samples.converged) {
                p.diagnostics.note = "posterior sampler not converged (split R-hat >= threshold)";
            }
            auto shared = std::make_shared<PosteriorSamples>(std::move(samples));
            p.scorer = [std_, shared](const MachineRecord& r) {
                return posterior_score(*shared, std_.transform_row(featurize(r)));
            };
            p.uses_threshold = true;
            p.threshold = optimize_threshold(detail::score_all(p, train), y, cfg.schedule, cfg.grid);
            return p;
        }
        case PipelineId::L5: {
            const std::vector<int> y = detail::labels_of(train);
            detail::require_both_classes(y, id);
            Matrix X;
            X.reserve(train.size());
            for (const auto& lr : train) X.push_back(detail::causal_augmented_features(lr.record));
            GbmModel model = fit_gbm(X, y, cfg.gbm);
            p.diagnostics.gbm_loss_trace = model.loss_trace;
            auto shared = std::make_shared<GbmModel>(std::move(model));
            p.scorer = [shared](const MachineRecord& r) {
                return shared->score(detail::causal_augmented_features(r));
            };
            p.uses_threshold = true;
            p.threshold = optimize_threshold(detail::score_all(p, train), y, cfg.schedule, cfg.grid);
            p.diagnostics.insights = detail::causal_insights(cfg.dag, train);
            return p;
        }
        case PipelineId::L6: {
            RuleModel rule = fit_rule_model(train, cfg.schedule, cfg.rule_budget,
                                            derive_seed(seed, 6));
            p.diagnostics.rule = rule;
            p.scorer = [rule](const MachineRecord& r) { return rule.fires(r) ? 1.0 : 0.0; };
            p.uses_threshold = false;
            p.threshold = 0.5;
            return p;
        }
    }
    throw ConfigError("unknown pipeline id");
}

struct PipelineEvaluation {
    ConfusionCounts counts;
    EvaluationMetrics metrics;
};

inline PipelineEvaluation evaluate_pipeline(const FittedPipeline& p,
                                            const std::vector<LabeledRecord>& data,
                                            const CostSchedule& schedule,
                                            std::int64_t baseline) {
    PipelineEvaluation eval;
    for (const auto& lr : data) {
        const bool predicted = p.predict(lr.record);
        if (predicted) {
            (lr.label ? eval.counts.tp : eval.counts.fp) += 1;
        } else {
            (lr.label ? eval.counts.fn : eval.counts.tn) += 1;
        }
    }
    eval.metrics = evaluation_metrics(eval.counts, schedule, baseline);
    return eval;
}

// Train-minus-test savings percentages, in percentage points.
inline double generalization_gap(double train_savings_pct, double test_savings_pct) {
    return train_savings_pct - test_savings_pct;
}

}  // namespace pmbench
