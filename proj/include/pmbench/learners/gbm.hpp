#pragma once

// Gradient-boosted trees for binary log-loss. Stagewise regression trees
// are fit to residuals (y - p) with Newton leaf values sum(g)/sum(p(1-p)).
// Each stage must not increase training log-loss: if a stage would, its
// leaf values are halved (a few times if needed) and finally zeroed, so
// the recorded loss trace is non-increasing by construction. In practice
// the damping never fires at the default learning rate.

#include <cmath>
#include <vector>

#include "pmbench/errors.hpp"
#include "pmbench/learners/logistic.hpp"
#include "pmbench/learners/tree.hpp"

namespace pmbench {

struct GbmConfig {
    int n_trees = 100;
    double learning_rate = 0.1;
    int max_depth = 3;
    int min_samples_leaf = 20;
    int min_samples_split = 2;
};

struct GbmModel {
    double initial_log_odds = 0.0;
    std::vector<TreeModel> trees;  // leaf values already include the learning rate
    GbmConfig config;
    std::vector<double> loss_trace;  // entry 0 is the loss at the constant model

    double decision(const std::vector<double>& x) const {
        double f = initial_log_odds;
        for (const auto& t : trees) f += t.score(x);
        return f;
    }

    double score(const std::vector<double>& x) const { return sigmoid(decision(x)); }
};

namespace detail {

inline double mean_log_loss(const std::vector<double>& f, const std::vector<int>& y) {
    double loss = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        loss += softplus(f[i]) - (y[i] ? f[i] : 0.0);
    }
    return loss / static_cast<double>(f.size());
}

}  // namespace detail

inline GbmModel fit_gbm(const Matrix& X, const std::vector<int>& y,
                        const GbmConfig& cfg = {}) {
    if (X.empty() || X.size() != y.size()) {
        throw NumericError("gbm fit needs a non-empty X matching y");
    }
    std::size_t pos = 0;
    for (int v : y) pos += v ? 1 : 0;
    if (pos == 0 || pos == y.size()) {
        throw NumericError("gbm fit needs both classes present (base log-odds undefined)");
    }

    const std::size_t n = X.size();
    const double p0 = static_cast<double>(pos) / static_cast<double>(n);

    GbmModel model;
    model.config = cfg;
    model.initial_log_odds = std::log(p0 / (1.0 - p0));

    TreeConstraints cons;
    cons.max_depth = cfg.max_depth;
    cons.min_samples_split = cfg.min_samples_split;
    cons.min_samples_leaf = cfg.min_samples_leaf;

    std::vector<double> f(n, model.initial_log_odds);
    double loss = detail::mean_log_loss(f, y);
    model.loss_trace.push_back(loss);

    std::vector<double> grad(n), hess(n);
    for (int round = 0; round < cfg.n_trees; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(f[i]);
            grad[i] = (y[i] ? 1.0 : 0.0) - p;
            hess[i] = std::max(p * (1.0 - p), 1e-12);
        }
        TreeModel tree = fit_regression_tree(X, grad, hess, cons);
        tree.scale_leaves(cfg.learning_rate);

        // apply the stage, backing off if it would raise training loss
        std::vector<double> f_try(n);
        double scale = 1.0;
        for (int attempt = 0; attempt <= 30; ++attempt) {
            for (std::size_t i = 0; i < n; ++i) f_try[i] = f[i] + scale * tree.score(X[i]);
            const double loss_try = detail::mean_log_loss(f_try, y);
            if (loss_try <= loss) {
                tree.scale_leaves(scale);
                f = std::move(f_try);
                f_try.assign(n, 0.0);
                loss = loss_try;
                break;
            }
            if (attempt == 30) {
                tree.scale_leaves(0.0);  // drop the stage entirely
                break;
            }
            scale *= 0.5;
        }
        model.trees.push_back(std::move(tree));
        model.loss_trace.push_back(loss);
    }
    return model;
}

}  // namespace pmbench
