#include <set>

#include "geoses/report.hpp"
#include "geoses/util.hpp"

namespace geoses {

namespace {

constexpr int kValueDigits = 10;

std::string fmt(double v) { return format_double(v, kValueDigits); }

}  // namespace

std::string scores_export_csv(const IndexResult& result, const AreaTable& original,
                              const RunConfig& config, const std::string& catalog_label) {
    std::string pre;
    pre += "# geoses index export\n";
    pre += "# tool_version: " + std::string(kToolVersion) + "\n";
    pre += "# catalog: " + catalog_label + "\n";
    pre += "# config: scale=" + to_string(config.scale) +
           " shift_constant=" + fmt(config.pipeline.shift_constant) +
           " variance_threshold=" + fmt(config.pipeline.variance_threshold) +
           " orientation_variable=" + result.orientation_variable + "\n";
    pre += "# final_variables: " + join(result.stage2_selected, " ") + "\n";
    {
        std::vector<std::string> reps;
        for (const auto& d : result.dimensions)
            reps.push_back(d.dimension + "=" + d.representative);
        pre += "# dimension_representatives: " + join(reps, " ") + "\n";
    }
    pre += "# inactive_dimensions: " + join(result.inactive_dimensions, " ") + "\n";
    pre += "# cronbach_alpha: " +
           (result.cronbach_alpha ? fmt(*result.cronbach_alpha) : std::string("undefined")) + "\n";

    CsvTable out;
    out.header = {"unit_id", "geoses"};
    for (const auto& d : result.dimensions) {
        out.header.push_back(d.dimension);
        out.header.push_back(d.dimension + "_raw");
    }
    for (std::size_t i = 0; i < result.unit_ids.size(); ++i) {
        std::vector<std::string> row;
        row.push_back(result.unit_ids[i]);
        row.push_back(fmt(result.scores[i]));
        for (const auto& d : result.dimensions) {
            row.push_back(fmt(d.sub_scores[i]));
            row.push_back(fmt(original.column(d.representative)[i]));
        }
        out.rows.push_back(std::move(row));
    }
    return to_csv(out, config.delim(), pre);
}

namespace {

void report_rows(CsvTable& out, const std::vector<ModelReportRow>& rows) {
    for (const auto& r : rows) {
        if (!r.computed) {
            // local multicollinearity or another degeneracy: not computable
            out.rows.push_back({r.model, r.indicator, "--", "--", "--", "--", "", ""});
            continue;
        }
        out.rows.push_back({r.model, r.indicator, fmt(r.r2_adjusted), fmt(r.aicc),
                            r.moran_i ? fmt(*r.moran_i) : "",
                            r.moran_p ? fmt(*r.moran_p) : "", r.best_fit ? "*" : "",
                            r.spatial_dependence ? "#" : ""});
    }
}

}  // namespace

std::string validation_report_csv(const std::vector<ModelReportRow>& gwr_rows,
                                  const std::vector<ModelReportRow>& ols_rows, char delimiter) {
    std::string pre;
    pre += "# geoses validation report\n";
    pre += "# rows sorted ascending by AICc within each model block\n";
    pre += "# best_fit: * marks the lowest AICc; spatial_dependence: # marks moran_p < 0.05\n";
    CsvTable out;
    out.header = {"model",   "indicator", "r2_global_adjusted", "aicc",
                  "moran_i", "moran_p",   "best_fit",           "spatial_dependence"};
    report_rows(out, gwr_rows);
    report_rows(out, ols_rows);
    return to_csv(out, delimiter, pre);
}

std::string correlation_matrix_csv(const CorrelationMatrix& corr, char delimiter) {
    CsvTable out;
    out.header = {"indicator"};
    for (const auto& n : corr.variable_names) out.header.push_back(n);
    for (std::size_t i = 0; i < corr.size(); ++i) {
        std::vector<std::string> row;
        row.push_back(corr.variable_names[i]);
        for (std::size_t j = 0; j < corr.size(); ++j)
            row.push_back(j <= i ? fmt(corr.at(i, j)) : "");
        out.rows.push_back(std::move(row));
    }
    return to_csv(out, delimiter, "# correlation matrix (lower triangle)\n");
}

}  // namespace geoses
