#pragma once

// Brute-force reference implementations used as independent oracles. These
// deliberately avoid the library's kernels and numerics: plain loops, naive
// summation, textbook formulas.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracles {

inline double naive_mean(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double naive_pearson(const std::vector<double>& a, const std::vector<double>& b) {
    double ma = naive_mean(a), mb = naive_mean(b);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// standardized Cronbach alpha from scratch: correlation matrix by naive
// Pearson, mean off-diagonal, k r / (1 + (k-1) r)
inline double naive_cronbach(const std::vector<std::vector<double>>& cols,
                             const std::vector<double>& signs) {
    std::size_t k = cols.size();
    double sum_r = 0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            double si = signs[i] < 0 ? -1.0 : 1.0;
            double sj = signs[j] < 0 ? -1.0 : 1.0;
            sum_r += si * sj * naive_pearson(cols[i], cols[j]);
            ++pairs;
        }
    double rbar = sum_r / static_cast<double>(pairs);
    return static_cast<double>(k) * rbar / (1.0 + (static_cast<double>(k) - 1.0) * rbar);
}

// "linear" (R type 7) quantile of an unweighted sample, pct in [0, 100]
inline double linear_quantile(std::vector<double> values, double pct) {
    if (values.empty()) throw std::invalid_argument("empty");
    std::sort(values.begin(), values.end());
    double h = (static_cast<double>(values.size()) - 1.0) * pct / 100.0;
    auto lo = static_cast<std::size_t>(std::floor(h));
    auto hi = static_cast<std::size_t>(std::ceil(h));
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

// expand integer weights into a duplicated sample
inline std::vector<double> expand_weights(const std::vector<std::pair<double, int>>& vw) {
    std::vector<double> out;
    for (const auto& [v, w] : vw)
        for (int i = 0; i < w; ++i) out.push_back(v);
    return out;
}

// Moran's I by direct double loop over the full weight matrix
inline double naive_moran(const std::vector<double>& values,
                          const std::vector<std::vector<int>>& wmat) {
    std::size_t n = values.size();
    double mu = naive_mean(values);
    double s0 = 0, num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        den += (values[i] - mu) * (values[i] - mu);
        for (std::size_t j = 0; j < n; ++j) {
            s0 += wmat[i][j];
            num += wmat[i][j] * (values[i] - mu) * (values[j] - mu);
        }
    }
    return (static_cast<double>(n) / s0) * num / den;
}

// max |A - V diag(L) V^T| entry
inline double reconstruction_error(const std::vector<double>& corr,
                                   const std::vector<double>& eigenvalues,
                                   const std::vector<double>& loadings, std::size_t k) {
    double worst = 0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0;
            for (std::size_t c = 0; c < k; ++c)
                s += loadings[i * k + c] * eigenvalues[c] * loadings[j * k + c];
            worst = std::max(worst, std::abs(s - corr[i * k + j]));
        }
    return worst;
}

}  // namespace oracles
