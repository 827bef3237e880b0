#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace geoses {

// Pearson correlation matrix of a set of named columns.
struct CorrelationMatrix {
    std::vector<std::string> variable_names;
    std::vector<double> values;  // k x k row-major, symmetric, unit diagonal

    std::size_t size() const { return variable_names.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * size() + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * size() + j]; }

    // symmetry, unit diagonal, range; throws NumericError on violation.
    // Positive semidefiniteness is enforced (within 1e-8) by run_pca.
    void validate() const;
};

struct PcaResult {
    std::vector<std::string> variable_names;
    std::vector<double> eigenvalues;          // descending, nonnegative
    std::vector<double> loadings;             // k_vars x k_comps row-major, orthonormal columns
    std::vector<double> explained_fraction;   // eigenvalue / sum(eigenvalues)
    std::vector<std::vector<double>> scores;  // one column per component, length n_units

    std::size_t n_variables() const { return variable_names.size(); }
    double loading(std::size_t var, std::size_t comp) const {
        return loadings[var * n_variables() + comp];
    }
};

// Pearson correlations of the given columns (>= 3 rows). A constant column is
// an error naming the column; callers decide whether to drop it.
CorrelationMatrix correlation(const std::vector<std::vector<double>>& columns,
                              const std::vector<std::string>& names);

// z-scores per column (sample sd); input to run_pca score computation.
std::vector<std::vector<double>> standardize_columns(const std::vector<std::vector<double>>& columns,
                                                     const std::vector<std::string>& names);

// Eigendecomposition of the correlation matrix by cyclic Jacobi rotations,
// plus component scores (standardized_columns may be empty to skip scores).
//
// Determinism guarantees:
//  - each loading column is sign-canonicalized so its entry of largest
//    magnitude is positive (ties broken by lowest variable index);
//  - equal eigenvalues are ordered by the variable index of that anchor entry.
PcaResult run_pca(const CorrelationMatrix& corr,
                  const std::vector<std::vector<double>>& standardized_columns);

// Smallest m with cumulative explained fraction >= threshold (threshold in (0,1]).
std::size_t select_components(const PcaResult& result, double threshold);

}  // namespace geoses
