#include "geoses/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "geoses/kernels.hpp"
#include "geoses/stats.hpp"
#include "geoses/util.hpp"

namespace geoses {

namespace {

std::string resolve_orientation_variable(const VariableCatalog& catalog,
                                         const PipelineConfig& config) {
    if (!config.orientation_variable.empty()) {
        if (!catalog.find_variable(config.orientation_variable))
            throw ConfigError("orientation_variable '" + config.orientation_variable +
                              "' not in catalog");
        return config.orientation_variable;
    }
    for (const auto& dim : catalog.dimensions) {
        if (dim.name != "income") continue;
        for (const auto& v : dim.variables)
            if (v.kind == VariableKind::weighted_mean) return v.name;
        return dim.variables.front().name;
    }
    throw ConfigError(
        "catalog has no 'income' dimension; set orientation_variable explicitly");
}

std::vector<std::vector<double>> gather_columns(const AreaTable& table,
                                                const std::vector<std::string>& names) {
    std::vector<std::vector<double>> cols;
    cols.reserve(names.size());
    for (const auto& n : names) cols.push_back(table.column(n));
    return cols;
}

}  // namespace

std::vector<std::string> IndexResult::active_dimension_names() const {
    std::vector<std::string> names;
    names.reserve(dimensions.size());
    for (const auto& d : dimensions) names.push_back(d.dimension);
    return names;
}

AreaTable preprocess(const AreaTable& table, const PipelineConfig& config) {
    AreaTable shifted = table;
    for (auto& col : shifted.columns)
        for (auto& v : col) v += config.shift_constant;
    return shifted;
}

std::vector<std::pair<std::string, std::vector<std::string>>> stage1_dimension_selection(
    const AreaTable& shifted, const VariableCatalog& catalog, const PipelineConfig& config,
    std::vector<std::string>& dropped_constants, std::map<std::string, StageSummary>& summaries,
    Warnings& warnings) {
    std::vector<std::pair<std::string, std::vector<std::string>>> selected;

    for (const auto& dim : catalog.dimensions) {
        std::vector<std::string> usable;
        for (const auto& v : dim.variables) {
            const auto& col = shifted.column(v.name);
            if (stats::is_constant(col)) {
                dropped_constants.push_back(v.name);
                warnings.add("variable '" + v.name + "' is constant and was dropped");
            } else {
                usable.push_back(v.name);
            }
        }
        if (usable.empty())
            throw DataError("dimension '" + dim.name + "' has no non-constant variable");

        auto cols = gather_columns(shifted, usable);
        auto corr = correlation(cols, usable);
        auto pca = run_pca(corr, {});
        std::size_t m = select_components(pca, config.variance_threshold);

        std::set<std::size_t> picked;
        for (std::size_t c = 0; c < m; ++c) {
            std::size_t best = 0;
            double best_abs = -1.0;
            for (std::size_t i = 0; i < usable.size(); ++i) {
                double a = std::abs(pca.loading(i, c));
                if (a > best_abs) {
                    best_abs = a;
                    best = i;
                }
            }
            picked.insert(best);
        }
        std::vector<std::string> names;
        for (std::size_t i : picked) names.push_back(usable[i]);  // set is ordered -> catalog order

        StageSummary s;
        s.variables = usable;
        s.eigenvalues = pca.eigenvalues;
        s.components_kept = m;
        for (std::size_t i = 0; i < usable.size(); ++i) s.first_loadings.push_back(pca.loading(i, 0));
        for (std::size_t comp = 0; comp < m; ++comp) {
            std::vector<double> col(usable.size());
            for (std::size_t i = 0; i < usable.size(); ++i) col[i] = pca.loading(i, comp);
            s.component_loadings.push_back(std::move(col));
        }
        summaries[dim.name] = std::move(s);

        selected.emplace_back(dim.name, std::move(names));
    }
    return selected;
}

std::vector<std::string> stage2_filter(const std::vector<std::string>& names,
                                       const std::vector<double>& first_loadings,
                                       Warnings& warnings) {
    if (names.size() != first_loadings.size())
        throw NumericError("stage2_filter: names/loadings mismatch");
    std::vector<double> mags(first_loadings.size());
    for (std::size_t i = 0; i < first_loadings.size(); ++i) mags[i] = std::abs(first_loadings[i]);
    double mean_mag = stats::mean(mags);
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (mags[i] > mean_mag) kept.push_back(names[i]);
    if (kept.empty()) {
        warnings.add("stage 2: all loading magnitudes equal the mean; keeping all " +
                     std::to_string(names.size()) + " variables");
        kept = names;
    }
    return kept;
}

std::vector<std::string> stage2_above_mean_selection(const AreaTable& shifted,
                                                     const std::vector<std::string>& stage1_vars,
                                                     StageSummary& summary, Warnings& warnings) {
    if (stage1_vars.size() < 2)
        throw NumericError("stage 2 requires at least 2 variables");
    auto cols = gather_columns(shifted, stage1_vars);
    auto corr = correlation(cols, stage1_vars);
    auto pca = run_pca(corr, {});
    std::vector<double> first(stage1_vars.size());
    for (std::size_t i = 0; i < stage1_vars.size(); ++i) first[i] = pca.loading(i, 0);

    summary.variables = stage1_vars;
    summary.eigenvalues = pca.eigenvalues;
    summary.components_kept = 1;
    summary.first_loadings = first;

    return stage2_filter(stage1_vars, first, warnings);
}

Stage3Output stage3_final_index(const AreaTable& shifted,
                                const std::vector<std::string>& final_vars,
                                const std::string& orientation_variable) {
    if (final_vars.empty()) throw NumericError("stage 3 requires at least 1 variable");
    auto cols = gather_columns(shifted, final_vars);
    auto z = standardize_columns(cols, final_vars);
    auto corr = correlation(cols, final_vars);
    auto pca = run_pca(corr, z);

    Stage3Output out;
    out.raw_scores = pca.scores[0];
    out.correlations = corr;
    for (std::size_t i = 0; i < final_vars.size(); ++i)
        out.loadings.emplace_back(final_vars[i], pca.loading(i, 0));

    const auto& orient = shifted.column(orientation_variable);
    double r = stats::pearson(out.raw_scores, orient, "orientation on " + orientation_variable);
    if (r < 0.0) {
        out.flipped = true;
        for (auto& v : out.raw_scores) v = -v;
        for (auto& [name, l] : out.loadings) l = -l;
    }

    out.summary.variables = final_vars;
    out.summary.eigenvalues = pca.eigenvalues;
    out.summary.components_kept = 1;
    for (const auto& [name, l] : out.loadings) out.summary.first_loadings.push_back(l);
    return out;
}

std::vector<double> standardize_scores(const std::vector<double>& raw) {
    return stats::minmax_scale(raw, "index scores");
}

std::vector<DimensionDecomposition> decompose_dimensions(
    const AreaTable& shifted, const VariableCatalog& catalog,
    const std::vector<std::string>& final_vars, const std::vector<double>& scores,
    std::vector<std::string>& inactive_dimensions) {
    std::set<std::string> final_set(final_vars.begin(), final_vars.end());
    std::vector<DimensionDecomposition> out;
    for (const auto& dim : catalog.dimensions) {
        std::vector<std::string> candidates;
        for (const auto& v : dim.variables)
            if (final_set.count(v.name)) candidates.push_back(v.name);
        if (candidates.empty()) {
            inactive_dimensions.push_back(dim.name);
            continue;
        }
        DimensionDecomposition d;
        d.dimension = dim.name;
        double best_abs = -1.0;
        for (const auto& name : candidates) {
            double r = stats::pearson(shifted.column(name), scores, name);
            if (std::abs(r) > best_abs) {
                best_abs = std::abs(r);
                d.representative = name;
                d.correlation = r;
            }
        }
        d.sub_scores = stats::minmax_scale(shifted.column(d.representative), d.representative);
        out.push_back(std::move(d));
    }
    return out;
}

double cronbach_alpha_from_corr(const CorrelationMatrix& corr, const std::vector<double>& signs) {
    std::size_t k = corr.size();
    if (k < 2) throw NumericError("cronbach alpha requires at least 2 variables");
    if (signs.size() != k) throw NumericError("cronbach alpha: sign vector mismatch");
    kernels::Accum acc;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            double si = signs[i] < 0.0 ? -1.0 : 1.0;
            double sj = signs[j] < 0.0 ? -1.0 : 1.0;
            acc.add(si * sj * corr.at(i, j));
        }
    double pairs = static_cast<double>(k * (k - 1)) / 2.0;
    double rbar = acc.value() / pairs;
    double denom = 1.0 + (static_cast<double>(k) - 1.0) * rbar;
    if (std::abs(denom) < 1e-12)
        throw NumericError("cronbach alpha undefined: mean correlation at degenerate boundary");
    return static_cast<double>(k) * rbar / denom;
}

double cronbach_alpha(const std::vector<std::vector<double>>& columns,
                      const std::vector<double>& signs) {
    if (columns.size() < 2) throw NumericError("cronbach alpha requires at least 2 variables");
    std::vector<std::string> names(columns.size());
    for (std::size_t i = 0; i < names.size(); ++i) names[i] = "v" + std::to_string(i);
    return cronbach_alpha_from_corr(correlation(columns, names), signs);
}

CorrelationMatrix compare_with_reference(const IndexResult& result, const AreaTable& original,
                                         const std::vector<std::string>& reference_unit_ids,
                                         const std::vector<std::string>& reference_names,
                                         const std::vector<std::vector<double>>& reference_columns) {
    if (reference_names.size() != reference_columns.size())
        throw DataError("reference names/columns mismatch");
    if (reference_unit_ids != result.unit_ids) {
        std::set<std::string> ours(result.unit_ids.begin(), result.unit_ids.end());
        std::set<std::string> theirs(reference_unit_ids.begin(), reference_unit_ids.end());
        std::vector<std::string> missing, extra;
        for (const auto& id : ours)
            if (!theirs.count(id)) missing.push_back(id);
        for (const auto& id : theirs)
            if (!ours.count(id)) extra.push_back(id);
        throw DataError("reference units misaligned; missing: [" + join(missing, ", ") +
                        "] extra: [" + join(extra, ", ") + "]");
    }

    std::vector<std::string> names{"geoses"};
    std::vector<std::vector<double>> cols{result.scores};
    for (const auto& d : result.dimensions) {
        names.push_back(d.dimension);
        cols.push_back(original.column(d.representative));
    }
    for (std::size_t i = 0; i < reference_names.size(); ++i) {
        names.push_back(reference_names[i]);
        cols.push_back(reference_columns[i]);
    }
    return correlation(cols, names);
}

IndexResult run_index_pipeline(const AreaTable& table, const VariableCatalog& catalog,
                               const PipelineConfig& config) {
    catalog.validate();
    table.validate_shape();
    if (!(config.variance_threshold > 0.0 && config.variance_threshold <= 1.0))
        throw ConfigError("variance_threshold must be in (0, 1]");
    if (table.n_units() < 3) throw DataError("index pipeline needs at least 3 units");

    IndexResult res;
    res.unit_ids = table.unit_ids;
    res.orientation_variable = resolve_orientation_variable(catalog, config);

    AreaTable shifted = preprocess(table, config);

    res.stage1_selected = stage1_dimension_selection(shifted, catalog, config,
                                                     res.dropped_constant_variables,
                                                     res.stage1_pca, res.warnings);
    if (std::find(res.dropped_constant_variables.begin(), res.dropped_constant_variables.end(),
                  res.orientation_variable) != res.dropped_constant_variables.end())
        throw NumericError("orientation variable '" + res.orientation_variable +
                           "' is constant; index orientation undefined");

    std::vector<std::string> stage1_union;
    for (const auto& [dim, vars] : res.stage1_selected)
        stage1_union.insert(stage1_union.end(), vars.begin(), vars.end());

    if (stage1_union.size() == 1) {
        res.warnings.add("stage 2 skipped: only one variable selected in stage 1");
        res.stage2_selected = stage1_union;
        res.stage2_pca.variables = stage1_union;
        res.stage2_pca.components_kept = 1;
        res.stage2_pca.eigenvalues = {1.0};
        res.stage2_pca.first_loadings = {1.0};
    } else {
        res.stage2_selected =
            stage2_above_mean_selection(shifted, stage1_union, res.stage2_pca, res.warnings);
    }

    Stage3Output s3 = stage3_final_index(shifted, res.stage2_selected, res.orientation_variable);
    res.raw_first_component = s3.raw_scores;
    res.final_loadings = s3.loadings;
    res.stage3_pca = s3.summary;
    res.orientation_flipped = s3.flipped;

    res.scores = standardize_scores(res.raw_first_component);

    res.dimensions = decompose_dimensions(shifted, catalog, res.stage2_selected, res.scores,
                                          res.inactive_dimensions);

    if (res.stage2_selected.size() >= 2) {
        std::vector<double> signs;
        for (const auto& [name, l] : res.final_loadings) signs.push_back(l);
        res.cronbach_alpha = cronbach_alpha_from_corr(s3.correlations, signs);
    } else {
        res.warnings.add("cronbach alpha undefined for a single-variable index");
    }
    return res;
}

}  // namespace geoses
