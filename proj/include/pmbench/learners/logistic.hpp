#pragma once

// Class-weighted L2-regularized logistic regression, trained by full-batch
// gradient descent with Armijo backtracking. The loss and gradient are
// standalone functions so they can be checked against finite differences.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pmbench/errors.hpp"
#include "pmbench/learners/standardizer.hpp"

namespace pmbench {

inline double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z) without overflow
inline double softplus(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

struct ClassWeights {
    double neg = 1.0;
    double pos = 1.0;

    double of(int label) const { return label ? pos : neg; }
};

// "Balanced" heuristic: w_class = n_total / (2 * n_class).
inline ClassWeights balanced_class_weights(const std::vector<int>& y) {
    std::size_t pos = 0;
    for (int v : y) pos += v ? 1 : 0;
    const std::size_t neg = y.size() - pos;
    if (pos == 0 || neg == 0) {
        throw NumericError("balanced class weights need both classes present");
    }
    const double n = static_cast<double>(y.size());
    return {n / (2.0 * static_cast<double>(neg)), n / (2.0 * static_cast<double>(pos))};
}

struct LogisticConfig {
    double l2_penalty = 1e-4;  // applies to weights, not the intercept
    int max_iters = 5000;
    double tolerance = 1e-6;   // gradient L2 norm
};

struct LogisticModel {
    std::vector<double> weights;  // on the (standardized) input scale
    double intercept = 0.0;
    ClassWeights class_weights;
    bool converged = false;
    int iterations = 0;
    double final_gradient_norm = 0.0;

    double decision(const std::vector<double>& x) const {
        double z = intercept;
        for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * x[j];
        return z;
    }

    double score(const std::vector<double>& x) const { return sigmoid(decision(x)); }
};

// Mean weighted negative log-likelihood plus (l2/2)*||w||^2.
inline double weighted_logistic_loss(const Matrix& X, const std::vector<int>& y,
                                     const ClassWeights& cw, double l2_penalty,
                                     const std::vector<double>& w, double b) {
    const double n = static_cast<double>(X.size());
    double loss = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        double z = b;
        for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * X[i][j];
        loss += cw.of(y[i]) * (softplus(z) - (y[i] ? z : 0.0));
    }
    loss /= n;
    double reg = 0.0;
    for (double wj : w) reg += wj * wj;
    return loss + 0.5 * l2_penalty * reg;
}

// Gradient of the loss above; last entry is the intercept derivative.
inline std::vector<double> weighted_logistic_gradient(const Matrix& X,
                                                      const std::vector<int>& y,
                                                      const ClassWeights& cw,
                                                      double l2_penalty,
                                                      const std::vector<double>& w,
                                                      double b) {
    const std::size_t d = w.size();
    const double n = static_cast<double>(X.size());
    std::vector<double> g(d + 1, 0.0);
    for (std::size_t i = 0; i < X.size(); ++i) {
        double z = b;
        for (std::size_t j = 0; j < d; ++j) z += w[j] * X[i][j];
        const double resid = cw.of(y[i]) * (sigmoid(z) - (y[i] ? 1.0 : 0.0));
        for (std::size_t j = 0; j < d; ++j) g[j] += resid * X[i][j];
        g[d] += resid;
    }
    for (auto& v : g) v /= n;
    for (std::size_t j = 0; j < d; ++j) g[j] += l2_penalty * w[j];
    return g;
}

inline LogisticModel fit_logistic(const Matrix& X, const std::vector<int>& y,
                                  const ClassWeights& cw,
                                  const LogisticConfig& cfg = {}) {
    if (X.empty() || X.size() != y.size()) {
        throw NumericError("logistic fit needs a non-empty X matching y");
    }
    if (!(cw.neg > 0.0 && cw.pos > 0.0)) {
        throw NumericError("class weights must be positive");
    }
    const std::size_t d = X[0].size();
    for (const auto& row : X) {
        for (double v : row) {
            if (!std::isfinite(v)) throw NumericError("non-finite feature value in logistic fit");
        }
    }

    std::vector<double> w(d, 0.0);
    double b = 0.0;
    double loss = weighted_logistic_loss(X, y, cw, cfg.l2_penalty, w, b);
    double step = 1.0;

    LogisticModel model;
    model.class_weights = cw;
    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        const std::vector<double> g = weighted_logistic_gradient(X, y, cw, cfg.l2_penalty, w, b);
        double gnorm2 = 0.0;
        for (double v : g) gnorm2 += v * v;
        model.final_gradient_norm = std::sqrt(gnorm2);
        if (model.final_gradient_norm < cfg.tolerance) {
            model.converged = true;
            break;
        }
        // Armijo backtracking on the steepest-descent direction.
        step = std::min(step * 2.0, 1e6);
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            std::vector<double> w_try(d);
            for (std::size_t j = 0; j < d; ++j) w_try[j] = w[j] - step * g[j];
            const double b_try = b - step * g[d];
            const double loss_try =
                weighted_logistic_loss(X, y, cw, cfg.l2_penalty, w_try, b_try);
            if (loss_try <= loss - 1e-4 * step * gnorm2) {
                w = std::move(w_try);
                b = b_try;
                loss = loss_try;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // numerically stuck: gradient too small to improve
    }
    model.weights = std::move(w);
    model.intercept = b;
    model.iterations = iter;
    return model;
}

}  // namespace pmbench
