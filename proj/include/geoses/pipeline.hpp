#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geoses/area_table.hpp"
#include "geoses/catalog.hpp"
#include "geoses/error.hpp"
#include "geoses/pca.hpp"

namespace geoses {

struct PipelineConfig {
    double shift_constant = 10.0;
    double variance_threshold = 0.75;
    // variable the final index must correlate non-negatively with; empty
    // resolves to the income dimension's weighted-mean variable
    std::string orientation_variable;
};

struct StageSummary {
    std::vector<std::string> variables;
    std::vector<double> eigenvalues;
    std::size_t components_kept = 0;
    std::vector<double> first_loadings;  // first component, aligned to variables
    // loadings of every kept component (stage 1 selects per component)
    std::vector<std::vector<double>> component_loadings;
};

struct DimensionDecomposition {
    std::string dimension;
    std::string representative;
    double correlation = 0.0;        // corr(representative, index), signed
    std::vector<double> sub_scores;  // representative column min-max scaled to [-1, +1]
};

struct IndexResult {
    std::vector<std::string> unit_ids;
    std::vector<double> scores;               // exact min -1, max +1
    std::vector<double> raw_first_component;  // post-orientation, pre-standardization

    std::vector<std::pair<std::string, std::vector<std::string>>> stage1_selected;  // per dimension
    std::vector<std::string> stage2_selected;                  // final variable list
    std::vector<std::pair<std::string, double>> final_loadings;

    std::vector<DimensionDecomposition> dimensions;  // active, catalog order
    std::vector<std::string> inactive_dimensions;
    std::optional<double> cronbach_alpha;  // absent when < 2 final variables

    std::vector<std::string> dropped_constant_variables;
    std::string orientation_variable;
    bool orientation_flipped = false;

    std::map<std::string, StageSummary> stage1_pca;  // per dimension
    StageSummary stage2_pca;
    StageSummary stage3_pca;
    Warnings warnings;

    std::vector<std::string> active_dimension_names() const;
};

// Every cell incremented by the shift constant; coordinates and population
// are untouched. The caller keeps the original table as the audit copy.
AreaTable preprocess(const AreaTable& table, const PipelineConfig& config);

// Per dimension: PCA, keep components to the variance threshold, take the
// variable with the largest absolute loading in each kept component (set
// semantics). A dimension whose variables are all constant is an error.
std::vector<std::pair<std::string, std::vector<std::string>>> stage1_dimension_selection(
    const AreaTable& shifted, const VariableCatalog& catalog, const PipelineConfig& config,
    std::vector<std::string>& dropped_constants, std::map<std::string, StageSummary>& summaries,
    Warnings& warnings);

// The stage-2 rule on first-component loadings: keep |loading| strictly above
// the mean magnitude; all-equal magnitudes fall back to keeping everything.
std::vector<std::string> stage2_filter(const std::vector<std::string>& names,
                                       const std::vector<double>& first_loadings,
                                       Warnings& warnings);

std::vector<std::string> stage2_above_mean_selection(const AreaTable& shifted,
                                                     const std::vector<std::string>& stage1_vars,
                                                     StageSummary& summary, Warnings& warnings);

struct Stage3Output {
    std::vector<double> raw_scores;  // first component, orientation applied
    std::vector<std::pair<std::string, double>> loadings;
    CorrelationMatrix correlations;  // of the final variables
    StageSummary summary;
    bool flipped = false;
};

Stage3Output stage3_final_index(const AreaTable& shifted,
                                const std::vector<std::string>& final_vars,
                                const std::string& orientation_variable);

// affine map onto [-1, +1]; min -> -1, max -> +1 exactly
std::vector<double> standardize_scores(const std::vector<double>& raw);

std::vector<DimensionDecomposition> decompose_dimensions(
    const AreaTable& shifted, const VariableCatalog& catalog,
    const std::vector<std::string>& final_vars, const std::vector<double>& scores,
    std::vector<std::string>& inactive_dimensions);

// Standardized Cronbach's alpha k*r/(1+(k-1)*r) where r is the mean
// off-diagonal correlation after aligning column signs. Throws on k < 2.
double cronbach_alpha(const std::vector<std::vector<double>>& columns,
                      const std::vector<double>& signs);
double cronbach_alpha_from_corr(const CorrelationMatrix& corr, const std::vector<double>& signs);

// Full correlation matrix over {index, active dimension representatives,
// reference columns}, for construct validation against an external index.
CorrelationMatrix compare_with_reference(const IndexResult& result, const AreaTable& original,
                                         const std::vector<std::string>& reference_unit_ids,
                                         const std::vector<std::string>& reference_names,
                                         const std::vector<std::vector<double>>& reference_columns);

IndexResult run_index_pipeline(const AreaTable& table, const VariableCatalog& catalog,
                               const PipelineConfig& config);

}  // namespace geoses
