#pragma once

// Greedy CART growth shared by the classification tree (Gini impurity,
// leaves store the positive fraction) and the boosted regression trees
// (squared-error splits, Newton leaf values). Splits are searched over
// midpoints of adjacent distinct sorted values per feature; ties break
// toward the lowest feature index, then the lowest threshold, so fits are
// deterministic given input order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "pmbench/errors.hpp"
#include "pmbench/learners/standardizer.hpp"

namespace pmbench {

struct TreeConstraints {
    int max_depth = 5;
    int min_samples_split = 50;
    int min_samples_leaf = 20;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf prediction
    int n_samples = 0;

    bool is_leaf() const { return feature < 0; }
};

struct TreeModel {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    TreeConstraints constraints;

    // x goes left when x[feature] < threshold
    double score(const std::vector<double>& x) const {
        int i = 0;
        while (!nodes[i].is_leaf()) {
            i = x[nodes[i].feature] < nodes[i].threshold ? nodes[i].left : nodes[i].right;
        }
        return nodes[i].value;
    }

    int depth() const { return nodes.empty() ? 0 : depth_below(0); }

    void scale_leaves(double factor) {
        for (auto& n : nodes) {
            if (n.is_leaf()) n.value *= factor;
        }
    }

private:
    int depth_below(int i) const {
        if (nodes[i].is_leaf()) return 0;
        return 1 + std::max(depth_below(nodes[i].left), depth_below(nodes[i].right));
    }
};

namespace detail {

// Gini criterion over binary labels. Side impurity is reported as
// n * gini(side) so summing both sides gives the weighted objective.
struct GiniCriterion {
    struct Stats {
        double n = 0.0;
        double pos = 0.0;

        void add(double target, double /*hess*/) { n += 1.0; pos += target; }
        void sub(double target, double /*hess*/) { n -= 1.0; pos -= target; }
    };

    static double impurity(const Stats& s) {
        if (s.n <= 0.0) return 0.0;
        return 2.0 * s.pos * (s.n - s.pos) / s.n;
    }
    static double leaf_value(const Stats& s) { return s.n > 0.0 ? s.pos / s.n : 0.0; }
    static bool pure(const Stats& s) { return s.pos <= 0.0 || s.pos >= s.n; }
};

// Squared-error criterion on gradient targets; leaf values take a Newton
// step sum(g)/sum(h) (h = 1 reduces to the plain mean).
struct SquaredErrorCriterion {
    struct Stats {
        double n = 0.0;
        double sum = 0.0;
        double sumsq = 0.0;
        double sum_h = 0.0;

        void add(double target, double hess) {
            n += 1.0; sum += target; sumsq += target * target; sum_h += hess;
        }
        void sub(double target, double hess) {
            n -= 1.0; sum -= target; sumsq -= target * target; sum_h -= hess;
        }
    };

    static double impurity(const Stats& s) {
        if (s.n <= 0.0) return 0.0;
        return std::max(0.0, s.sumsq - s.sum * s.sum / s.n);
    }
    static double leaf_value(const Stats& s) {
        return s.sum_h > 1e-12 ? s.sum / s.sum_h : 0.0;
    }
    static bool pure(const Stats& s) { return impurity(s) <= 1e-12; }
};

template <class Criterion>
class TreeGrower {
public:
    TreeGrower(const Matrix& X, const std::vector<double>& targets,
               const std::vector<double>& hessians, const TreeConstraints& cons)
        : X_(X), targets_(targets), hessians_(hessians), cons_(cons) {}

    TreeModel grow() {
        TreeModel model;
        model.constraints = cons_;
        std::vector<int> all(X_.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
        build(all, 0, model.nodes);
        return model;
    }

private:
    using Stats = typename Criterion::Stats;

    Stats stats_of(const std::vector<int>& idx) const {
        Stats s;
        for (int i : idx) s.add(targets_[i], hessians_[i]);
        return s;
    }

    int build(const std::vector<int>& idx, int depth, std::vector<TreeNode>& nodes) {
        const Stats total = stats_of(idx);
        const int node_id = static_cast<int>(nodes.size());
        nodes.push_back({});
        nodes[node_id].n_samples = static_cast<int>(idx.size());
        nodes[node_id].value = Criterion::leaf_value(total);

        const bool can_split = depth < cons_.max_depth &&
                               static_cast<int>(idx.size()) >= cons_.min_samples_split &&
                               !Criterion::pure(total);
        if (!can_split) return node_id;

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_impurity = std::numeric_limits<double>::infinity();
        const std::size_t d = X_[0].size();
        std::vector<std::pair<double, int>> order(idx.size());

        for (std::size_t f = 0; f < d; ++f) {
            for (std::size_t k = 0; k < idx.size(); ++k) {
                order[k] = {X_[idx[k]][f], idx[k]};
            }
            std::sort(order.begin(), order.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            Stats left;
            Stats right = total;
            for (std::size_t k = 0; k + 1 < order.size(); ++k) {
                left.add(targets_[order[k].second], hessians_[order[k].second]);
                right.sub(targets_[order[k].second], hessians_[order[k].second]);
                if (order[k].first == order[k + 1].first) continue;
                const auto n_left = static_cast<int>(k + 1);
                const auto n_right = static_cast<int>(order.size() - k - 1);
                if (n_left < cons_.min_samples_leaf || n_right < cons_.min_samples_leaf) continue;
                const double imp = Criterion::impurity(left) + Criterion::impurity(right);
                if (imp < best_impurity) {
                    best_impurity = imp;
                    best_feature = static_cast<int>(f);
                    best_threshold = 0.5 * (order[k].first + order[k + 1].first);
                }
            }
        }
        if (best_feature < 0) return node_id;  // constraints left nothing to try

        std::vector<int> left_idx, right_idx;
        left_idx.reserve(idx.size());
        right_idx.reserve(idx.size());
        for (int i : idx) {
            (X_[i][best_feature] < best_threshold ? left_idx : right_idx).push_back(i);
        }
        nodes[node_id].feature = best_feature;
        nodes[node_id].threshold = best_threshold;
        nodes[node_id].left = build(left_idx, depth + 1, nodes);
        nodes[node_id].right = build(right_idx, depth + 1, nodes);
        return node_id;
    }

    const Matrix& X_;
    const std::vector<double>& targets_;
    const std::vector<double>& hessians_;
    TreeConstraints cons_;
};

}  // namespace detail

// Classification tree: leaves hold the training positive-class fraction.
inline TreeModel fit_tree(const Matrix& X, const std::vector<int>& y,
                          const TreeConstraints& cons = {}) {
    if (X.empty() || X.size() != y.size()) {
        throw NumericError("tree fit needs a non-empty X matching y");
    }
    std::vector<double> targets(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) targets[i] = y[i] ? 1.0 : 0.0;
    const std::vector<double> hess(y.size(), 1.0);
    return detail::TreeGrower<detail::GiniCriterion>(X, targets, hess, cons).grow();
}

// Regression tree on gradient targets with optional per-sample hessians
// (used by the boosting stages; hessian 1 gives ordinary mean leaves).
inline TreeModel fit_regression_tree(const Matrix& X, const std::vector<double>& targets,
                                     const std::vector<double>& hessians,
                                     const TreeConstraints& cons) {
    if (X.empty() || X.size() != targets.size() || X.size() != hessians.size()) {
        throw NumericError("regression tree fit needs matching X, targets and hessians");
    }
    return detail::TreeGrower<detail::SquaredErrorCriterion>(X, targets, hessians, cons).grow();
}

}  // namespace pmbench
