#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "geoses/area_table.hpp"
#include "geoses/catalog.hpp"
#include "geoses/csv.hpp"
#include "geoses/ingest.hpp"
#include "geoses/pipeline.hpp"
#include "geoses/spatial.hpp"

namespace geoses {

enum class Scale { national, state, intramunicipal };
std::string to_string(Scale s);
Scale parse_scale(const std::string& s);

// Everything a run needs; a JSON config file and CLI flags both map onto this.
struct RunConfig {
    std::string catalog_path;  // empty: bundled census2010 catalog
    std::string mapping_path;
    std::string persons_path;
    std::string households_path;
    std::string coordinates_path;
    std::string geometry_path;   // GeoJSON FeatureCollection
    std::string adjacency_path;  // alternative to geometry for weights
    std::string outcome_path;
    std::string reference_path;  // optional construct-validation columns
    std::string scores_path;     // validate/render input; default <output_dir>/geoses_scores.csv
    std::string manifest_path;   // dump-diagnostics input; default <output_dir>/manifest.json

    Scale scale = Scale::national;
    std::string delimiter = ",";
    MissingPolicy missing_policy = MissingPolicy::drop_unit;
    PipelineConfig pipeline;
    int gwr_neighbor_count = 0;  // 0: 53 for national/state, 30 for intramunicipal
    int permutations = 999;
    std::optional<std::uint64_t> seed;  // mandatory when permutations > 0
    MoranSidedness moran_side = MoranSidedness::one_sided;
    std::string unit_id_property = "unit_id";
    std::string palette = "red_blue";  // or brown_teal
    std::string output_dir = "out";

    char delim() const;
    int effective_gwr_k() const;
    std::string effective_scores_path() const;
    std::string effective_manifest_path() const;
};

// JSON config document; CLI flags override fields afterwards.
void apply_config_json(RunConfig& config, const std::string& json_text,
                       const std::string& context);
RunConfig load_run_config_file(const std::string& path);

// ---------------------------------------------------------------------------
// Commands (the CLI subcommands call straight into these)
// ---------------------------------------------------------------------------

struct BuildIndexOutputs {
    IndexResult result;
    AreaTable table;  // original, unshifted
    std::string scores_path;
    std::string area_table_path;
    std::string manifest_path;
};
BuildIndexOutputs cmd_build_index(const RunConfig& config, std::ostream& diag);

struct ValidateOutputs {
    std::vector<ModelReportRow> gwr_rows;
    std::vector<ModelReportRow> ols_rows;
    std::vector<std::string> indicators;
    std::string report_path;
};
ValidateOutputs cmd_validate(const RunConfig& config, std::ostream& diag);

struct RenderMapOutputs {
    std::string html_path;
    std::vector<std::string> layers;
    std::vector<std::string> missing_geometry;
};
RenderMapOutputs cmd_render_map(const RunConfig& config, std::ostream& diag);

// Delimited eigenvalue/loading dump from a run manifest.
std::string cmd_dump_diagnostics(const RunConfig& config);

// ---------------------------------------------------------------------------
// Export builders (exposed for tests)
// ---------------------------------------------------------------------------

std::string scores_export_csv(const IndexResult& result, const AreaTable& original,
                              const RunConfig& config, const std::string& catalog_label);

std::string validation_report_csv(const std::vector<ModelReportRow>& gwr_rows,
                                  const std::vector<ModelReportRow>& ols_rows, char delimiter);

// Lower-triangular correlation matrix export (indicator rows/columns).
std::string correlation_matrix_csv(const CorrelationMatrix& corr, char delimiter);

// Self-contained HTML choropleth: one layer per non-raw scores column,
// per-unit popup with the exact export strings, diverging palette over
// [-1, +1]. Score units without geometry are listed in an in-file panel and
// returned through missing_geometry.
std::string render_map_html(const CsvTable& scores, const PolygonSet& polygons,
                            const std::string& palette, const std::string& title,
                            std::vector<std::string>& missing_geometry,
                            std::vector<std::string>& layers_out);

}  // namespace geoses
