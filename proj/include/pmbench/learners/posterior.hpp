#pragma once

// Bayesian logistic regression via adaptive random-walk Metropolis.
// Priors are Normal(0, prior_sd) on every weight and the intercept. Each
// chain starts overdispersed around an internally computed MAP estimate,
// proposes steps preconditioned by the diagonal curvature at the MAP, and
// adapts a global step size during tuning (Robbins-Monro toward the target
// acceptance rate). Recorded draws are thinned: one kept draw per `thin`
// kernel steps, which keeps autocorrelation low enough for the split R-hat
// gate at the default draw counts. Tuning draws are discarded.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pmbench/errors.hpp"
#include "pmbench/learners/logistic.hpp"
#include "pmbench/rng.hpp"

namespace pmbench {

struct PosteriorConfig {
    int draws = 500;       // recorded draws per chain
    int tune = 300;        // tuning draws per chain (discarded)
    int chains = 2;
    double prior_sd = 10.0;
    int thin = 20;         // kernel steps per recorded draw
    double target_accept = 0.374;
    double rhat_threshold = 1.05;
};

struct PosteriorSamples {
    Matrix draws;  // rows: parameter vectors [w_0..w_{d-1}, intercept], chains concatenated in order
    std::vector<int> chain_draw_counts;
    std::vector<double> r_hat;           // split R-hat per parameter
    std::vector<double> acceptance_rate; // per chain, sampling phase
    bool converged = false;
    std::string kernel;

    std::size_t n_params() const { return draws.empty() ? 0 : draws[0].size(); }
};

namespace detail {

// Unnormalized log posterior (log-likelihood plus Gaussian log-prior).
inline double log_posterior(const Matrix& X, const std::vector<int>& y,
                            double prior_sd, const std::vector<double>& theta) {
    const std::size_t d = theta.size() - 1;
    double lp = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        double z = theta[d];
        for (std::size_t j = 0; j < d; ++j) z += theta[j] * X[i][j];
        lp += (y[i] ? z : 0.0) - softplus(z);
    }
    const double inv_var = 1.0 / (prior_sd * prior_sd);
    for (double t : theta) lp -= 0.5 * inv_var * t * t;
    return lp;
}

inline std::vector<double> log_posterior_gradient(const Matrix& X, const std::vector<int>& y,
                                                  double prior_sd,
                                                  const std::vector<double>& theta) {
    const std::size_t d = theta.size() - 1;
    std::vector<double> g(theta.size(), 0.0);
    for (std::size_t i = 0; i < X.size(); ++i) {
        double z = theta[d];
        for (std::size_t j = 0; j < d; ++j) z += theta[j] * X[i][j];
        const double resid = (y[i] ? 1.0 : 0.0) - sigmoid(z);
        for (std::size_t j = 0; j < d; ++j) g[j] += resid * X[i][j];
        g[d] += resid;
    }
    const double inv_var = 1.0 / (prior_sd * prior_sd);
    for (std::size_t j = 0; j < theta.size(); ++j) g[j] -= inv_var * theta[j];
    return g;
}

// Gradient-ascent MAP with backtracking; a rough mode is all we need to
// seed the chains and the proposal scales.
inline std::vector<double> find_map(const Matrix& X, const std::vector<int>& y,
                                    double prior_sd, std::size_t n_params) {
    std::vector<double> theta(n_params, 0.0);
    double lp = log_posterior(X, y, prior_sd, theta);
    double step = 1e-3;
    for (int iter = 0; iter < 300; ++iter) {
        const std::vector<double> g = log_posterior_gradient(X, y, prior_sd, theta);
        double gnorm2 = 0.0;
        for (double v : g) gnorm2 += v * v;
        if (std::sqrt(gnorm2) < 1e-8) break;
        step = std::min(step * 2.0, 1e3);
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            std::vector<double> trial(theta);
            for (std::size_t j = 0; j < theta.size(); ++j) trial[j] += step * g[j];
            const double lp_try = log_posterior(X, y, prior_sd, trial);
            if (lp_try >= lp + 1e-4 * step * gnorm2) {
                theta = std::move(trial);
                lp = lp_try;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
    return theta;
}

// Diagonal of the negative log-posterior Hessian at theta.
inline std::vector<double> curvature_diagonal(const Matrix& X, const std::vector<int>& y,
                                              double prior_sd,
                                              const std::vector<double>& theta) {
    const std::size_t d = theta.size() - 1;
    std::vector<double> h(theta.size(), 1.0 / (prior_sd * prior_sd));
    for (std::size_t i = 0; i < X.size(); ++i) {
        double z = theta[d];
        for (std::size_t j = 0; j < d; ++j) z += theta[j] * X[i][j];
        const double p = sigmoid(z);
        const double w = p * (1.0 - p);
        for (std::size_t j = 0; j < d; ++j) h[j] += w * X[i][j] * X[i][j];
        h[d] += w;
    }
    return h;
}

// Split R-hat (each chain cut in half) for one parameter's draw sequences.
inline double split_r_hat(const std::vector<std::vector<double>>& sequences) {
    const std::size_t m = sequences.size();
    const std::size_t n = sequences[0].size();
    if (n < 2) return 1.0;
    std::vector<double> means(m, 0.0), vars(m, 0.0);
    for (std::size_t c = 0; c < m; ++c) {
        for (double v : sequences[c]) means[c] += v;
        means[c] /= static_cast<double>(n);
        for (double v : sequences[c]) vars[c] += (v - means[c]) * (v - means[c]);
        vars[c] /= static_cast<double>(n - 1);
    }
    double grand = 0.0;
    for (double v : means) grand += v;
    grand /= static_cast<double>(m);
    double between = 0.0;
    for (double v : means) between += (v - grand) * (v - grand);
    between *= static_cast<double>(n) / static_cast<double>(m - 1);
    double within = 0.0;
    for (double v : vars) within += v;
    within /= static_cast<double>(m);
    if (within <= 0.0) return 1.0;  // degenerate constant chains
    const double var_plus =
        (static_cast<double>(n - 1) / static_cast<double>(n)) * within + between / static_cast<double>(n);
    return std::sqrt(var_plus / within);
}

}  // namespace detail

// Draws from the Bayesian logistic posterior. X must already be
// standardized (fit scales on train, reuse on test). `n_features_hint`
// supplies the dimensionality when X is empty (prior-only sampling).
inline PosteriorSamples sample_posterior_logistic(const Matrix& X, const std::vector<int>& y,
                                                  const PosteriorConfig& cfg, std::uint64_t seed,
                                                  int n_features_hint = -1) {
    if (X.size() != y.size()) throw NumericError("posterior sampling needs X matching y");
    if (cfg.chains < 2) throw NumericError("posterior sampling needs at least 2 chains");
    const std::size_t d = X.empty() ? static_cast<std::size_t>(n_features_hint < 0 ? 0 : n_features_hint)
                                    : X[0].size();
    const std::size_t p = d + 1;

    const std::vector<double> map = detail::find_map(X, y, cfg.prior_sd, p);
    const std::vector<double> curv = detail::curvature_diagonal(X, y, cfg.prior_sd, map);
    std::vector<double> prop_scale(p);
    for (std::size_t j = 0; j < p; ++j) prop_scale[j] = 1.0 / std::sqrt(curv[j]);

    PosteriorSamples out;
    out.kernel = "adaptive-rw-metropolis(thin=" + std::to_string(cfg.thin) +
                 ",target=" + std::to_string(cfg.target_accept) + ")";
    out.draws.reserve(static_cast<std::size_t>(cfg.draws) * cfg.chains);

    for (int chain = 0; chain < cfg.chains; ++chain) {
        Rng rng(derive_seed(seed, 0xC0FFEEULL + static_cast<std::uint64_t>(chain)));

        std::vector<double> theta(p);
        for (std::size_t j = 0; j < p; ++j) theta[j] = map[j] + 2.0 * prop_scale[j] * rng.normal();
        double lp = detail::log_posterior(X, y, cfg.prior_sd, theta);

        double log_step = std::log(2.38 / std::sqrt(static_cast<double>(p)));
        std::vector<double> proposal(p);
        long accepted = 0, attempted = 0;
        long adapt_t = 0;

        auto mh_step = [&](bool adapt) {
            for (std::size_t j = 0; j < p; ++j) {
                proposal[j] = theta[j] + std::exp(log_step) * prop_scale[j] * rng.normal();
            }
            const double lp_prop = detail::log_posterior(X, y, cfg.prior_sd, proposal);
            const double log_alpha = lp_prop - lp;
            const double alpha = log_alpha >= 0.0 ? 1.0 : std::exp(log_alpha);
            if (rng.uniform01() < alpha) {
                theta = proposal;
                lp = lp_prop;
                ++accepted;
            }
            ++attempted;
            if (adapt) {
                ++adapt_t;
                log_step += std::pow(static_cast<double>(adapt_t), -0.6) *
                            (alpha - cfg.target_accept);
            }
        };

        for (long t = 0; t < static_cast<long>(cfg.tune) * cfg.thin; ++t) mh_step(true);
        accepted = 0;
        attempted = 0;
        for (int k = 0; k < cfg.draws; ++k) {
            for (int t = 0; t < cfg.thin; ++t) mh_step(false);
            out.draws.push_back(theta);
        }
        out.chain_draw_counts.push_back(cfg.draws);
        out.acceptance_rate.push_back(attempted > 0
                                          ? static_cast<double>(accepted) / static_cast<double>(attempted)
                                          : 0.0);
    }

    // split R-hat across 2*chains half-sequences per parameter
    out.r_hat.assign(p, 1.0);
    const int half = cfg.draws / 2;
    if (half >= 2) {
        for (std::size_t j = 0; j < p; ++j) {
            std::vector<std::vector<double>> seqs;
            for (int chain = 0; chain < cfg.chains; ++chain) {
                const std::size_t base = static_cast<std::size_t>(chain) * cfg.draws;
                std::vector<double> a, b;
                for (int k = 0; k < half; ++k) a.push_back(out.draws[base + k][j]);
                for (int k = half; k < 2 * half; ++k) b.push_back(out.draws[base + k][j]);
                seqs.push_back(std::move(a));
                seqs.push_back(std::move(b));
            }
            out.r_hat[j] = detail::split_r_hat(seqs);
        }
    }
    out.converged = true;
    for (double r : out.r_hat) {
        if (!(r < cfg.rhat_threshold)) out.converged = false;
    }
    return out;
}

// Posterior predictive mean: average of per-draw sigmoid scores.
inline double posterior_score(const PosteriorSamples& samples, const std::vector<double>& x) {
    if (samples.draws.empty()) throw NumericError("posterior_score needs at least one draw");
    const std::size_t d = samples.n_params() - 1;
    double acc = 0.0;
    for (const auto& theta : samples.draws) {
        double z = theta[d];
        for (std::size_t j = 0; j < d; ++j) z += theta[j] * x[j];
        acc += sigmoid(z);
    }
    return acc / static_cast<double>(samples.draws.size());
}

}  // namespace pmbench
