#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "geoses/report.hpp"
#include "geoses/util.hpp"

namespace {

using geoses::RunConfig;

// shared option plumbing: a --config JSON file is applied first, explicit
// flags override it
struct ConfigCli {
    std::string config_path;
    RunConfig cfg;
    std::optional<std::string> scale, missing_policy, moran_side, orientation_variable;
    std::optional<double> shift_constant, variance_threshold;
    std::optional<std::uint64_t> seed;
    std::optional<int> gwr_neighbors, permutations;

    void add_common(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file (flags override it)");
        cmd->add_option("--catalog", cfg.catalog_path, "catalog JSON (default: bundled census2010)");
        cmd->add_option("--delimiter", cfg.delimiter, "input/output field delimiter");
        cmd->add_option("--out", cfg.output_dir, "output directory")->capture_default_str();
        cmd->add_option("--scale", scale, "national | state | intramunicipal");
        cmd->add_option("--unit-id-property", cfg.unit_id_property,
                        "GeoJSON property carrying the unit id");
    }

    void finalize(CLI::App* cmd) {
        if (!config_path.empty()) {
            RunConfig from_file = geoses::load_run_config_file(config_path);
            // flags given on the command line win over the file
            std::swap(cfg, from_file);
            auto keep = [&](const std::string& flag, auto member) {
                const CLI::Option* opt = cmd->get_option_no_throw(flag);
                if (opt && opt->count()) cfg.*member = from_file.*member;
            };
            keep("--catalog", &RunConfig::catalog_path);
            keep("--mapping", &RunConfig::mapping_path);
            keep("--persons", &RunConfig::persons_path);
            keep("--households", &RunConfig::households_path);
            keep("--coords", &RunConfig::coordinates_path);
            keep("--geometry", &RunConfig::geometry_path);
            keep("--adjacency", &RunConfig::adjacency_path);
            keep("--outcome", &RunConfig::outcome_path);
            keep("--reference", &RunConfig::reference_path);
            keep("--scores", &RunConfig::scores_path);
            keep("--manifest", &RunConfig::manifest_path);
            keep("--delimiter", &RunConfig::delimiter);
            keep("--unit-id-property", &RunConfig::unit_id_property);
            keep("--palette", &RunConfig::palette);
            keep("--out", &RunConfig::output_dir);
        }
        if (scale) cfg.scale = geoses::parse_scale(*scale);
        if (missing_policy) {
            if (*missing_policy == "drop_unit")
                cfg.missing_policy = geoses::MissingPolicy::drop_unit;
            else if (*missing_policy == "impute_region_mean")
                cfg.missing_policy = geoses::MissingPolicy::impute_region_mean;
            else
                throw geoses::ConfigError(
                    "missing-policy must be drop_unit or impute_region_mean");
        }
        if (moran_side) {
            if (*moran_side == "one_sided")
                cfg.moran_side = geoses::MoranSidedness::one_sided;
            else if (*moran_side == "two_sided")
                cfg.moran_side = geoses::MoranSidedness::two_sided;
            else
                throw geoses::ConfigError("moran-side must be one_sided or two_sided");
        }
        if (shift_constant) cfg.pipeline.shift_constant = *shift_constant;
        if (variance_threshold) cfg.pipeline.variance_threshold = *variance_threshold;
        if (orientation_variable) cfg.pipeline.orientation_variable = *orientation_variable;
        if (seed) cfg.seed = *seed;
        if (gwr_neighbors) cfg.gwr_neighbor_count = *gwr_neighbors;
        if (permutations) cfg.permutations = *permutations;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geoses: composite socioeconomic index construction and spatial validation"};
    app.set_version_flag("--version", std::string(geoses::kToolVersion));
    app.require_subcommand(1);

    ConfigCli build, validate, render, dump;

    CLI::App* cb = app.add_subcommand("build-index",
                                      "aggregate microdata and build the index and its exports");
    build.add_common(cb);
    cb->add_option("--mapping", build.cfg.mapping_path, "variable recipe JSON");
    cb->add_option("--persons", build.cfg.persons_path, "persons records (delimited text)");
    cb->add_option("--households", build.cfg.households_path, "household records");
    cb->add_option("--coords", build.cfg.coordinates_path, "unit_id,x,y coordinates");
    cb->add_option("--reference", build.cfg.reference_path,
                   "external reference columns for the correlation matrix export");
    cb->add_option("--missing-policy", build.missing_policy, "drop_unit | impute_region_mean");
    cb->add_option("--shift-constant", build.shift_constant, "pre-processing shift (default 10)");
    cb->add_option("--variance-threshold", build.variance_threshold,
                   "stage-1 explained-variance threshold (default 0.75)");
    cb->add_option("--orientation-variable", build.orientation_variable,
                   "variable the index must correlate positively with");

    CLI::App* cv = app.add_subcommand("validate",
                                      "regress an outcome on the index and its dimensions");
    validate.add_common(cv);
    cv->add_option("--scores", validate.cfg.scores_path,
                   "scores export (default <out>/geoses_scores.csv)");
    cv->add_option("--outcome", validate.cfg.outcome_path, "unit_id,outcome values");
    cv->add_option("--coords", validate.cfg.coordinates_path, "unit_id,x,y coordinates");
    cv->add_option("--geometry", validate.cfg.geometry_path, "GeoJSON for queen weights");
    cv->add_option("--adjacency", validate.cfg.adjacency_path, "adjacency list file");
    cv->add_option("--gwr-neighbors", validate.gwr_neighbors,
                   "adaptive kernel neighbor count (default 53 national/state, 30 intramunicipal)");
    cv->add_option("--permutations", validate.permutations, "Moran permutations (default 999)");
    cv->add_option("--seed", validate.seed, "permutation seed (required when permutations > 0)");
    cv->add_option("--moran-side", validate.moran_side, "one_sided | two_sided");

    CLI::App* cr = app.add_subcommand("render-map", "standalone HTML choropleth of the index");
    render.add_common(cr);
    cr->add_option("--scores", render.cfg.scores_path,
                   "scores export (default <out>/geoses_scores.csv)");
    cr->add_option("--geometry", render.cfg.geometry_path, "GeoJSON FeatureCollection");
    cr->add_option("--palette", render.cfg.palette, "red_blue | brown_teal");

    CLI::App* cd = app.add_subcommand("dump-diagnostics",
                                      "eigenvalues and loadings from a run manifest");
    dump.add_common(cd);
    cd->add_option("--manifest", dump.cfg.manifest_path,
                   "manifest path (default <out>/manifest.json)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cb->parsed()) {
            build.finalize(cb);
            geoses::cmd_build_index(build.cfg, std::cerr);
        } else if (cv->parsed()) {
            validate.finalize(cv);
            geoses::cmd_validate(validate.cfg, std::cerr);
        } else if (cr->parsed()) {
            render.finalize(cr);
            geoses::cmd_render_map(render.cfg, std::cerr);
        } else if (cd->parsed()) {
            dump.finalize(cd);
            std::cout << geoses::cmd_dump_diagnostics(dump.cfg);
        }
    } catch (const geoses::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
