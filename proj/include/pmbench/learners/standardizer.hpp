#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pmbench/errors.hpp"

namespace pmbench {

using Matrix = std::vector<std::vector<double>>;

// Per-column zero-mean unit-variance scaling. Statistics come from the
// matrix given to fit (train), and are reused verbatim on later matrices
// (test). Constant columns keep divisor 1 so they map to exactly 0.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    std::vector<double> transform_row(const std::vector<double>& row) const {
        std::vector<double> out(row.size());
        for (std::size_t j = 0; j < row.size(); ++j) {
            out[j] = (row[j] - mean[j]) / scale[j];
        }
        return out;
    }
};

inline Standardizer fit_standardizer(const Matrix& X) {
    if (X.empty() || X[0].empty()) {
        throw NumericError("cannot fit standardizer on an empty matrix");
    }
    const std::size_t n = X.size();
    const std::size_t d = X[0].size();
    Standardizer s;
    s.mean.assign(d, 0.0);
    s.scale.assign(d, 1.0);
    for (const auto& row : X) {
        for (std::size_t j = 0; j < d; ++j) s.mean[j] += row[j];
    }
    for (std::size_t j = 0; j < d; ++j) s.mean[j] /= static_cast<double>(n);
    std::vector<double> var(d, 0.0);
    for (const auto& row : X) {
        for (std::size_t j = 0; j < d; ++j) {
            const double dv = row[j] - s.mean[j];
            var[j] += dv * dv;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        const double sd = std::sqrt(var[j] / static_cast<double>(n));
        s.scale[j] = sd > 0.0 ? sd : 1.0;
    }
    return s;
}

inline Matrix transform(const Standardizer& s, const Matrix& X) {
    Matrix out;
    out.reserve(X.size());
    for (const auto& row : X) out.push_back(s.transform_row(row));
    return out;
}

}  // namespace pmbench
