#include "geoses/stats.hpp"

#include <algorithm>
#include <cmath>

#include "geoses/error.hpp"
#include "geoses/kernels.hpp"

namespace geoses::stats {

double mean(std::span<const double> x) {
    if (x.empty()) throw NumericError("mean of empty vector");
    return kernels::sum(x) / static_cast<double>(x.size());
}

std::pair<double, double> min_max(std::span<const double> x) {
    if (x.empty()) throw NumericError("min/max of empty vector");
    auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return {*lo, *hi};
}

double centered_sumsq(std::span<const double> x) {
    double mu = mean(x);
    kernels::Accum acc;
    for (double v : x) {
        double d = v - mu;
        acc.add(d * d);
    }
    return acc.value();
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) throw NumericError("sample variance needs at least 2 values");
    return centered_sumsq(x) / static_cast<double>(x.size() - 1);
}

double sample_sd(std::span<const double> x) { return std::sqrt(sample_variance(x)); }

bool is_constant(std::span<const double> x) {
    auto [lo, hi] = min_max(x);
    return lo == hi;
}

double pearson(std::span<const double> a, std::span<const double> b, const std::string& label) {
    if (a.size() != b.size()) throw NumericError("pearson: length mismatch");
    if (a.size() < 2) throw NumericError("pearson: needs at least 2 values");
    std::string where = label.empty() ? std::string() : (" (" + label + ")");
    if (is_constant(a)) throw NumericError("pearson: first input is constant" + where);
    if (is_constant(b)) throw NumericError("pearson: second input is constant" + where);
    double mu_a = mean(a);
    double mu_b = mean(b);
    std::vector<double> ca(a.size()), cb(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        ca[i] = a[i] - mu_a;
        cb[i] = b[i] - mu_b;
    }
    double sxy = kernels::dot(ca, cb);
    double sxx = kernels::dot(ca, ca);
    double syy = kernels::dot(cb, cb);
    double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

std::vector<double> zscores(std::span<const double> x, const std::string& label) {
    std::string where = label.empty() ? std::string() : (" (" + label + ")");
    if (x.size() < 2) throw NumericError("zscores: needs at least 2 values" + where);
    if (is_constant(x)) throw NumericError("zscores: constant input" + where);
    double mu = mean(x);
    double sd = std::sqrt(centered_sumsq(x) / static_cast<double>(x.size() - 1));
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - mu) / sd;
    return z;
}

std::vector<double> minmax_scale(std::span<const double> x, const std::string& label) {
    std::string where = label.empty() ? std::string() : (" (" + label + ")");
    auto [lo, hi] = min_max(x);
    if (lo == hi) throw NumericError("minmax_scale: constant input" + where);
    double span = hi - lo;
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = 2.0 * (x[i] - lo) / span - 1.0;
    return out;
}

}  // namespace geoses::stats
