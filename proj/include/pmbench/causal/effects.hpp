#pragma once

// Adjusted effect estimation: ordinary least squares of the outcome on the
// treatment plus adjustment covariates, with Householder QR for numerical
// stability (noise-free linear data reproduces coefficients to machine
// precision). machine_type expands to indicator columns with L as the
// reference level; other graph variables map to single numeric columns
// derived from the records.

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "pmbench/causal/features.hpp"
#include "pmbench/data.hpp"
#include "pmbench/errors.hpp"
#include "pmbench/learners/standardizer.hpp"

namespace pmbench {

struct EffectEstimate {
    std::string treatment;
    std::string outcome;
    std::vector<std::string> adjustment;  // as given, sorted
    double coefficient = 0.0;             // outcome units per treatment unit
    double std_error = 0.0;
    std::size_t n = 0;
};

namespace detail {

struct OlsResult {
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    double rss = 0.0;
};

// Least squares through Householder QR. Throws NumericError naming the
// first column whose pivot collapses (collinear/duplicated covariates).
inline OlsResult ols_fit(Matrix design, std::vector<double> y,
                         const std::vector<std::string>& column_names) {
    const std::size_t n = design.size();
    const std::size_t p = design.empty() ? 0 : design[0].size();
    if (n < p || p == 0) {
        throw NumericError("least squares needs at least as many rows as columns");
    }

    std::vector<double> col_scale(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t i = 0; i < n; ++i) col_scale[j] = std::max(col_scale[j], std::abs(design[i][j]));
        if (col_scale[j] == 0.0) {
            throw NumericError("singular design matrix: column \"" + column_names[j] +
                               "\" is identically zero");
        }
    }

    // in-place Householder: design becomes R in its upper triangle
    for (std::size_t j = 0; j < p; ++j) {
        double norm = 0.0;
        for (std::size_t i = j; i < n; ++i) norm += design[i][j] * design[i][j];
        norm = std::sqrt(norm);
        if (norm <= 1e-12 * col_scale[j] * std::sqrt(static_cast<double>(n))) {
            throw NumericError("singular design matrix: column \"" + column_names[j] +
                               "\" is collinear with earlier columns");
        }
        const double alpha = design[j][j] > 0.0 ? -norm : norm;
        std::vector<double> v(n - j, 0.0);
        v[0] = design[j][j] - alpha;
        for (std::size_t i = j + 1; i < n; ++i) v[i - j] = design[i][j];
        double vnorm2 = 0.0;
        for (double x : v) vnorm2 += x * x;
        if (vnorm2 > 0.0) {
            for (std::size_t k = j; k < p; ++k) {
                double dot = 0.0;
                for (std::size_t i = j; i < n; ++i) dot += v[i - j] * design[i][k];
                const double f = 2.0 * dot / vnorm2;
                for (std::size_t i = j; i < n; ++i) design[i][k] -= f * v[i - j];
            }
            double dot = 0.0;
            for (std::size_t i = j; i < n; ++i) dot += v[i - j] * y[i];
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = j; i < n; ++i) y[i] -= f * v[i - j];
        }
        design[j][j] = alpha;
    }

    for (std::size_t j = 0; j < p; ++j) {
        if (std::abs(design[j][j]) <= 1e-10 * col_scale[j] * std::sqrt(static_cast<double>(n))) {
            throw NumericError("singular design matrix: column \"" + column_names[j] +
                               "\" is collinear with earlier columns");
        }
    }

    OlsResult out;
    out.coefficients.assign(p, 0.0);
    for (std::size_t jr = p; jr-- > 0;) {
        double acc = y[jr];
        for (std::size_t k = jr + 1; k < p; ++k) acc -= design[jr][k] * out.coefficients[k];
        out.coefficients[jr] = acc / design[jr][jr];
    }

    out.rss = 0.0;
    for (std::size_t i = p; i < n; ++i) out.rss += y[i] * y[i];

    // var(beta_j) = sigma^2 * ||row j of R^{-1}||^2, row via forward solve R^T u = e_j
    const double dof = static_cast<double>(n - p);
    const double sigma2 = dof > 0.0 ? out.rss / dof : 0.0;
    out.std_errors.assign(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        std::vector<double> u(p, 0.0);
        for (std::size_t i = j; i < p; ++i) {
            double acc = (i == j) ? 1.0 : 0.0;
            for (std::size_t k = j; k < i; ++k) acc -= design[k][i] * u[k];
            u[i] = acc / design[i][i];
        }
        double norm2 = 0.0;
        for (double x : u) norm2 += x * x;
        out.std_errors[j] = std::sqrt(sigma2 * norm2);
    }
    return out;
}

// Named columns derivable from a labeled record. machine_type is the only
// multi-column variable.
inline std::vector<std::pair<std::string, double>> variable_columns(const LabeledRecord& lr,
                                                                    const std::string& name) {
    const MachineRecord& r = lr.record;
    if (name == "air_temp") return {{name, r.air_temp}};
    if (name == "process_temp") return {{name, r.process_temp}};
    if (name == "rot_speed") return {{name, r.rot_speed}};
    if (name == "torque") return {{name, r.torque}};
    if (name == "tool_wear") return {{name, r.tool_wear}};
    if (name == "failure") return {{name, lr.label ? 1.0 : 0.0}};
    if (name == "temp_diff" || name == "power" || name == "overstrain") {
        const CausalFeatures f = derive_causal_features(r);
        if (name == "temp_diff") return {{name, f.temp_diff}};
        if (name == "power") return {{name, f.power}};
        return {{name, f.overstrain}};
    }
    if (name == "machine_type") {
        return {{"machine_type_M", r.machine_type == MachineType::M ? 1.0 : 0.0},
                {"machine_type_H", r.machine_type == MachineType::H ? 1.0 : 0.0}};
    }
    throw GraphError("variable \"" + name + "\" is not derivable from machine records");
}

}  // namespace detail

// OLS effect of `treatment` on `outcome` adjusted for `adjustment`. The
// caller is responsible for passing an adjustment set that satisfies the
// backdoor criterion when a causal reading is intended.
inline EffectEstimate estimate_effect(const std::vector<LabeledRecord>& data,
                                      const std::string& treatment, const std::string& outcome,
                                      const std::set<std::string>& adjustment) {
    if (data.empty()) throw NumericError("effect estimation needs data");
    if (treatment == outcome) throw GraphError("treatment and outcome must differ");
    if (treatment == "machine_type" || outcome == "machine_type") {
        throw GraphError("machine_type is categorical; it may only appear in the adjustment set");
    }

    std::vector<std::string> names{"(intercept)", treatment};
    Matrix design;
    std::vector<double> y;
    design.reserve(data.size());
    y.reserve(data.size());
    bool first = true;
    for (const auto& lr : data) {
        std::vector<double> row{1.0};
        row.push_back(detail::variable_columns(lr, treatment)[0].second);
        for (const auto& adj : adjustment) {
            for (const auto& [cname, value] : detail::variable_columns(lr, adj)) {
                row.push_back(value);
                if (first) names.push_back(cname);
            }
        }
        y.push_back(detail::variable_columns(lr, outcome)[0].second);
        design.push_back(std::move(row));
        first = false;
    }

    const detail::OlsResult ols = detail::ols_fit(std::move(design), std::move(y), names);
    EffectEstimate est;
    est.treatment = treatment;
    est.outcome = outcome;
    est.adjustment.assign(adjustment.begin(), adjustment.end());
    est.coefficient = ols.coefficients[1];
    est.std_error = ols.std_errors[1];
    est.n = data.size();
    return est;
}

}  // namespace pmbench
