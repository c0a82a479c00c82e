#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pmbench/learners/posterior.hpp"
#include "pmbench/rng.hpp"

using namespace pmbench;

TEST_CASE("prior recovery with no data") {
    PosteriorConfig cfg;
    cfg.draws = 500;
    cfg.tune = 300;
    cfg.chains = 2;
    const PosteriorSamples s = sample_posterior_logistic({}, {}, cfg, 2024, 2);
    REQUIRE(s.draws.size() == 1000);
    REQUIRE(s.n_params() == 3);

    const double bound = 3.0 * cfg.prior_sd / std::sqrt(1000.0);
    for (std::size_t j = 0; j < 3; ++j) {
        double mean = 0.0;
        for (const auto& draw : s.draws) mean += draw[j];
        mean /= static_cast<double>(s.draws.size());
        CHECK(std::abs(mean) < bound);
    }
}

TEST_CASE("strongly separable data puts nearly all slope mass above zero") {
    Matrix X;
    std::vector<int> y;
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const double x = (i % 2 == 0) ? -1.0 - rng.uniform01() : 1.0 + rng.uniform01();
        X.push_back({x});
        y.push_back(x > 0.0 ? 1 : 0);
    }
    const PosteriorSamples s = sample_posterior_logistic(X, y, {}, 11);
    std::size_t positive = 0;
    for (const auto& draw : s.draws) positive += draw[0] > 0.0 ? 1 : 0;
    CHECK(static_cast<double>(positive) / static_cast<double>(s.draws.size()) >= 0.99);
    CHECK(s.converged);
    for (double r : s.r_hat) CHECK(r < 1.05);
}

TEST_CASE("posterior_score is the arithmetic mean of per-draw sigmoids") {
    PosteriorSamples s;
    s.draws = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.5}};  // [w, b] rows
    s.chain_draw_counts = {3};
    const std::vector<double> x = {2.0};
    const double expected =
        (sigmoid(1.0 * 2.0 + 0.0) + sigmoid(0.0 * 2.0 + 1.0) + sigmoid(-1.0 * 2.0 + 0.5)) / 3.0;
    CHECK_THAT(posterior_score(s, x), Catch::Matchers::WithinAbs(expected, 1e-15));
}

TEST_CASE("sampler is deterministic given the seed and reports diagnostics") {
    Matrix X;
    std::vector<int> y;
    Rng rng(31);
    for (int i = 0; i < 120; ++i) {
        X.push_back({rng.normal(), rng.normal()});
        y.push_back(rng.uniform01() < sigmoid(X.back()[0]) ? 1 : 0);
    }
    PosteriorConfig cfg;
    cfg.draws = 100;
    cfg.tune = 100;
    const PosteriorSamples a = sample_posterior_logistic(X, y, cfg, 99);
    const PosteriorSamples b = sample_posterior_logistic(X, y, cfg, 99);
    CHECK(a.draws == b.draws);
    CHECK(a.r_hat == b.r_hat);
    REQUIRE(a.chain_draw_counts == std::vector<int>{100, 100});
    REQUIRE(a.acceptance_rate.size() == 2);
    for (double rate : a.acceptance_rate) {
        CHECK(rate > 0.05);
        CHECK(rate < 0.95);
    }

    const PosteriorSamples c = sample_posterior_logistic(X, y, cfg, 100);
    CHECK(a.draws != c.draws);
}
