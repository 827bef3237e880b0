#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace geoses::stats {

double mean(std::span<const double> x);
std::pair<double, double> min_max(std::span<const double> x);

// sum of squared deviations from the mean (two-pass)
double centered_sumsq(std::span<const double> x);
double sample_variance(std::span<const double> x);  // denominator n-1
double sample_sd(std::span<const double> x);

bool is_constant(std::span<const double> x);  // max == min

// Pearson correlation, two-pass centered; throws NumericError when either
// input is constant. `label` names the offending column in the message.
double pearson(std::span<const double> a, std::span<const double> b,
               const std::string& label = "");

// (x - mean) / sample_sd per element; throws NumericError on constant input.
std::vector<double> zscores(std::span<const double> x, const std::string& label = "");

// min-max affine map onto [-1, +1]; throws NumericError on constant input.
std::vector<double> minmax_scale(std::span<const double> x, const std::string& label = "");

}  // namespace geoses::stats
