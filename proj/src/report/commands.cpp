#include <algorithm>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "geoses/kernels.hpp"
#include "geoses/report.hpp"
#include "geoses/util.hpp"

namespace geoses {

using nlohmann::json;

namespace {

constexpr int kValueDigits = 10;
std::string fmt(double v) { return format_double(v, kValueDigits); }

json config_snapshot(const RunConfig& c) {
    json j;
    j["catalog"] = c.catalog_path;
    j["mapping"] = c.mapping_path;
    j["persons"] = c.persons_path;
    j["households"] = c.households_path;
    j["coordinates"] = c.coordinates_path;
    j["geometry"] = c.geometry_path;
    j["adjacency"] = c.adjacency_path;
    j["outcome"] = c.outcome_path;
    j["reference"] = c.reference_path;
    j["scale"] = to_string(c.scale);
    j["delimiter"] = c.delimiter;
    j["missing_policy"] =
        c.missing_policy == MissingPolicy::drop_unit ? "drop_unit" : "impute_region_mean";
    j["shift_constant"] = c.pipeline.shift_constant;
    j["variance_threshold"] = c.pipeline.variance_threshold;
    j["orientation_variable"] = c.pipeline.orientation_variable;
    j["gwr_neighbors"] = c.effective_gwr_k();
    j["permutations"] = c.permutations;
    if (c.seed) j["seed"] = *c.seed;
    j["moran_side"] =
        c.moran_side == MoranSidedness::one_sided ? "one_sided" : "two_sided";
    j["unit_id_property"] = c.unit_id_property;
    j["palette"] = c.palette;
    j["output_dir"] = c.output_dir;
    return j;
}

json tool_info() {
    return {{"name", "geoses"},
            {"version", std::string(kToolVersion)},
            {"kernels", std::string(kernels::backend_name(kernels::active_backend()))}};
}

void emit_warnings(const Warnings& warnings, std::ostream& diag) {
    for (const auto& w : warnings.messages) diag << "warning: " << w << "\n";
}

json input_entry(const std::string& path) {
    return {{"path", path}, {"hash", file_hash_hex(path)}};
}

struct OutputCollector {
    std::string dir;
    json hashes = json::object();

    std::string write(const std::string& name, const std::string& content) {
        std::string path = dir + "/" + name;
        write_file(path, content);
        hashes[name] = fnv1a64_hex(content);
        return path;
    }
};

json stage_summary_json(const StageSummary& s) {
    json j;
    j["variables"] = s.variables;
    j["eigenvalues"] = s.eigenvalues;
    j["components_kept"] = s.components_kept;
    j["first_loadings"] = s.first_loadings;
    if (!s.component_loadings.empty()) j["component_loadings"] = s.component_loadings;
    return j;
}

}  // namespace

// ---------------------------------------------------------------------------
// build-index
// ---------------------------------------------------------------------------

BuildIndexOutputs cmd_build_index(const RunConfig& config, std::ostream& diag) {
    if (config.mapping_path.empty()) throw ConfigError("build-index: mapping file required");
    if (config.persons_path.empty() && config.households_path.empty())
        throw ConfigError("build-index: at least one of persons/households required");
    if (config.coordinates_path.empty())
        throw ConfigError("build-index: coordinates file required");

    VariableCatalog catalog = config.catalog_path.empty()
                                  ? bundled_catalog()
                                  : load_catalog_file(config.catalog_path);
    MappingConfig mapping = load_mapping_file(config.mapping_path, catalog);
    char d = config.delim();

    std::map<std::string, RecordTable> universes;
    if (!config.persons_path.empty())
        universes.emplace("persons",
                          load_records_file(config.persons_path, d, mapping.missing_codes));
    if (!config.households_path.empty())
        universes.emplace("households",
                          load_records_file(config.households_path, d, mapping.missing_codes));
    auto coords =
        load_coordinates(read_file(config.coordinates_path), d, config.coordinates_path);

    IngestResult ingest =
        build_area_table(universes, catalog, mapping, coords, config.missing_policy);
    IndexResult result = run_index_pipeline(ingest.table, catalog, config.pipeline);

    std::string catalog_label =
        catalog.name + " " + catalog.version + " " + catalog_hash_hex(catalog);

    OutputCollector out{config.output_dir};
    BuildIndexOutputs res{std::move(result), std::move(ingest.table), "", "", ""};

    res.area_table_path = out.write(
        "area_table.csv",
        area_table_to_csv(res.table, d, "# geoses area table\n# catalog: " + catalog_label + "\n"));
    {
        // respondent totals, for auditing
        AreaTable pop;
        pop.unit_ids = res.table.unit_ids;
        pop.xs = res.table.xs;
        pop.ys = res.table.ys;
        pop.column_names = res.table.column_names;
        pop.columns = res.table.population;
        out.write("area_population.csv",
                  area_table_to_csv(pop, d, "# geoses weighted respondent totals\n"));
    }
    res.scores_path =
        out.write("geoses_scores.csv", scores_export_csv(res.result, res.table, config, catalog_label));

    if (!ingest.audit.empty()) {
        CsvTable audit;
        audit.header = {"unit_id", "variable", "action", "detail"};
        for (const auto& e : ingest.audit)
            audit.rows.push_back({e.unit_id, e.variable, e.action, e.detail});
        out.write("audit.csv", to_csv(audit, d));
    }

    if (!config.reference_path.empty()) {
        CsvTable ref = read_csv(config.reference_path, d);
        std::size_t id_col = ref.column("unit_id");
        std::map<std::string, std::size_t> ref_rows;
        for (std::size_t r = 0; r < ref.rows.size(); ++r) ref_rows[ref.rows[r][id_col]] = r;

        std::vector<std::string> ref_names;
        std::vector<std::size_t> ref_cols;
        for (std::size_t jcol = 0; jcol < ref.header.size(); ++jcol)
            if (jcol != id_col) {
                ref_names.push_back(ref.header[jcol]);
                ref_cols.push_back(jcol);
            }
        std::vector<std::string> ref_ids;
        std::vector<std::vector<double>> ref_values(ref_names.size());
        for (const auto& id : res.result.unit_ids) {
            auto it = ref_rows.find(id);
            if (it == ref_rows.end()) {
                ref_ids.push_back("(missing " + id + ")");
                continue;
            }
            ref_ids.push_back(id);
            for (std::size_t kcol = 0; kcol < ref_cols.size(); ++kcol)
                ref_values[kcol].push_back(parse_double(ref.rows[it->second][ref_cols[kcol]],
                                                        config.reference_path));
        }
        if (ref.rows.size() != res.result.unit_ids.size() || ref_ids != res.result.unit_ids) {
            std::vector<std::string> extra;
            std::set<std::string> ours(res.result.unit_ids.begin(), res.result.unit_ids.end());
            for (const auto& [id, row] : ref_rows)
                if (!ours.count(id)) extra.push_back(id);
            std::vector<std::string> missing;
            for (const auto& id : res.result.unit_ids)
                if (!ref_rows.count(id)) missing.push_back(id);
            throw DataError("reference units misaligned; missing: [" + join(missing, ", ") +
                            "] extra: [" + join(extra, ", ") + "]");
        }
        CorrelationMatrix cm =
            compare_with_reference(res.result, res.table, ref_ids, ref_names, ref_values);
        out.write("reference_correlations.csv", correlation_matrix_csv(cm, d));
    }

    // manifest
    json manifest;
    manifest["tool"] = tool_info();
    manifest["run"] = {{"command", "build-index"}, {"started", utc_timestamp()}};
    manifest["config"] = config_snapshot(config);
    json inputs;
    inputs["catalog"] = config.catalog_path.empty()
                            ? json{{"path", "(bundled census2010)"},
                                   {"hash", fnv1a64_hex(bundled_catalog_text())}}
                            : input_entry(config.catalog_path);
    inputs["mapping"] = input_entry(config.mapping_path);
    if (!config.persons_path.empty()) inputs["persons"] = input_entry(config.persons_path);
    if (!config.households_path.empty())
        inputs["households"] = input_entry(config.households_path);
    inputs["coordinates"] = input_entry(config.coordinates_path);
    if (!config.reference_path.empty()) inputs["reference"] = input_entry(config.reference_path);
    manifest["inputs"] = inputs;
    manifest["catalog"] = {{"name", catalog.name},
                           {"version", catalog.version},
                           {"hash", catalog_hash_hex(catalog)},
                           {"variables", catalog.variable_count()}};
    manifest["thresholds"] = ingest.thresholds;

    json stages;
    stages["dropped_constant_variables"] = res.result.dropped_constant_variables;
    json s1 = json::object();
    for (const auto& [dim, summary] : res.result.stage1_pca) {
        json js = stage_summary_json(summary);
        for (const auto& [sel_dim, sel_vars] : res.result.stage1_selected)
            if (sel_dim == dim) js["selected"] = sel_vars;
        s1[dim] = std::move(js);
    }
    stages["stage1"] = std::move(s1);
    {
        json js = stage_summary_json(res.result.stage2_pca);
        js["selected"] = res.result.stage2_selected;
        stages["stage2"] = std::move(js);
    }
    {
        json js = stage_summary_json(res.result.stage3_pca);
        js["orientation_variable"] = res.result.orientation_variable;
        js["orientation_flipped"] = res.result.orientation_flipped;
        stages["stage3"] = std::move(js);
    }
    stages["cronbach_alpha"] =
        res.result.cronbach_alpha ? json(*res.result.cronbach_alpha) : json(nullptr);
    {
        json active = json::array();
        for (const auto& dd : res.result.dimensions)
            active.push_back({{"dimension", dd.dimension},
                              {"representative", dd.representative},
                              {"correlation", dd.correlation}});
        stages["dimensions"] = {{"active", std::move(active)},
                                {"inactive", res.result.inactive_dimensions}};
    }
    manifest["stages"] = std::move(stages);
    manifest["units"] = {{"count", res.result.unit_ids.size()},
                         {"audit_entries", ingest.audit.size()}};
    json jw = json::array();
    for (const auto& m : ingest.warnings.messages) jw.push_back(m);
    for (const auto& m : res.result.warnings.messages) jw.push_back(m);
    manifest["warnings"] = std::move(jw);
    manifest["outputs"] = out.hashes;
    res.manifest_path = config.output_dir + "/manifest.json";
    write_file(res.manifest_path, manifest.dump(2) + "\n");

    emit_warnings(ingest.warnings, diag);
    emit_warnings(res.result.warnings, diag);
    diag << "build-index: " << res.result.unit_ids.size() << " units, "
         << res.result.stage2_selected.size() << " final variables, "
         << res.result.dimensions.size() << " active dimensions\n";
    return res;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

namespace {

SpatialWeights reorder_weights(const SpatialWeights& w, const std::vector<std::string>& order) {
    std::map<std::string, std::size_t> old_pos;
    for (std::size_t i = 0; i < w.unit_ids.size(); ++i) old_pos[w.unit_ids[i]] = i;
    std::vector<std::string> missing;
    for (const auto& id : order)
        if (!old_pos.count(id)) missing.push_back(id);
    if (!missing.empty())
        throw DataError("weights missing units: " + join(missing, ", "));

    std::vector<std::uint32_t> remap(w.unit_ids.size(), 0);
    std::set<std::size_t> used;
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::size_t old = old_pos[order[i]];
        remap[old] = static_cast<std::uint32_t>(i);
        used.insert(old);
    }
    SpatialWeights out;
    out.unit_ids = order;
    out.row_standardized = w.row_standardized;
    out.neighbors.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::size_t old = old_pos[order[i]];
        for (auto j : w.neighbors[old]) {
            if (!used.count(j)) continue;  // neighbor outside the analysis set
            out.neighbors[i].push_back(remap[j]);
        }
        std::sort(out.neighbors[i].begin(), out.neighbors[i].end());
    }
    out.validate();
    return out;
}

}  // namespace

ValidateOutputs cmd_validate(const RunConfig& config, std::ostream& diag) {
    if (config.permutations > 0 && !config.seed)
        throw ConfigError("validate: seed required when permutations > 0");
    if (config.outcome_path.empty()) throw ConfigError("validate: outcome file required");
    if (config.coordinates_path.empty())
        throw ConfigError("validate: coordinates file required");
    if (config.geometry_path.empty() == config.adjacency_path.empty())
        throw ConfigError("validate: exactly one of geometry/adjacency required");

    char d = config.delim();
    Warnings warnings;

    CsvTable scores = read_csv(config.effective_scores_path(), d);
    std::size_t id_col = scores.column("unit_id");
    std::vector<std::string> units;
    for (const auto& row : scores.rows) units.push_back(row[id_col]);
    std::size_t n = units.size();

    std::vector<std::string> indicators;
    std::vector<std::vector<double>> indicator_values;
    for (std::size_t j = 0; j < scores.header.size(); ++j) {
        const std::string& h = scores.header[j];
        if (h == "unit_id") continue;
        if (h.size() > 4 && h.substr(h.size() - 4) == "_raw") continue;
        indicators.push_back(h);
        std::vector<double> col(n);
        for (std::size_t r = 0; r < n; ++r)
            col[r] = parse_double(scores.rows[r][j], "scores column " + h);
        indicator_values.push_back(std::move(col));
    }
    if (indicators.empty() || indicators.front() != "geoses")
        throw DataError("scores file: expected a 'geoses' column first");

    // outcome aligned to score units
    std::vector<double> y(n);
    {
        CsvTable oc = read_csv(config.outcome_path, d);
        std::size_t oid = oc.column("unit_id");
        std::size_t oval;
        if (oc.has_column("outcome")) {
            oval = oc.column("outcome");
        } else {
            if (oc.header.size() != 2)
                throw ParseError(config.outcome_path +
                                 ": expected columns unit_id,outcome (or exactly one value column)");
            oval = oid == 0 ? 1 : 0;
        }
        std::map<std::string, double> by_id;
        for (const auto& row : oc.rows)
            by_id[row[oid]] = parse_double(row[oval], config.outcome_path);
        std::vector<std::string> missing, extra;
        std::set<std::string> ours(units.begin(), units.end());
        for (const auto& id : units)
            if (!by_id.count(id)) missing.push_back(id);
        for (const auto& [id, v] : by_id)
            if (!ours.count(id)) extra.push_back(id);
        if (!missing.empty() || !extra.empty())
            throw DataError("outcome units misaligned; missing: [" + join(missing, ", ") +
                            "] extra: [" + join(extra, ", ") + "]");
        for (std::size_t i = 0; i < n; ++i) y[i] = by_id[units[i]];
    }

    // coordinates aligned to score units
    std::vector<double> xs(n), ys(n);
    {
        auto coords =
            load_coordinates(read_file(config.coordinates_path), d, config.coordinates_path);
        std::vector<std::string> missing;
        for (const auto& id : units)
            if (!coords.count(id)) missing.push_back(id);
        if (!missing.empty())
            throw DataError("units without coordinates: " + join(missing, ", "));
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = coords[units[i]].first;
            ys[i] = coords[units[i]].second;
        }
    }

    // spatial weights aligned to score units
    SpatialWeights weights;
    std::optional<json> geometry_doc;
    if (!config.geometry_path.empty()) {
        std::string text = read_file(config.geometry_path);
        geometry_doc = json::parse(text);
        PolygonSet all = load_geojson(text, config.unit_id_property, config.geometry_path);
        std::map<std::string, const UnitGeometry*> by_id;
        for (const auto& u : all.units) by_id[u.unit_id] = &u;
        PolygonSet ordered;
        std::vector<std::string> missing;
        for (const auto& id : units) {
            auto it = by_id.find(id);
            if (it == by_id.end())
                missing.push_back(id);
            else
                ordered.units.push_back(*it->second);
        }
        if (!missing.empty())
            throw DataError("geometry missing units: " + join(missing, ", "));
        if (all.units.size() > units.size())
            warnings.add("geometry has " + std::to_string(all.units.size() - units.size()) +
                         " feature(s) not present in the scores file; ignored");
        weights = queen_contiguity(ordered, warnings);
    } else {
        weights = reorder_weights(adjacency_from_text(read_file(config.adjacency_path),
                                                      config.adjacency_path),
                                  units);
    }

    int k = config.effective_gwr_k();
    if (static_cast<std::size_t>(k) >= n)
        throw ConfigError("validate: gwr neighbor count " + std::to_string(k) +
                          " must be below the unit count " + std::to_string(n) +
                          "; set gwr_neighbors explicitly");

    // A locally constant indicator makes a local fit singular; such an
    // indicator is reported as not computable instead of aborting the run.
    std::vector<std::optional<SpatialFit>> gwr_fits(indicators.size()),
        ols_fits(indicators.size());
    for (std::size_t i = 0; i < indicators.size(); ++i) {
        MoranParams mp;
        mp.permutations = config.permutations;
        mp.side = config.moran_side;
        std::uint64_t base = config.seed.value_or(0);
        mp.seed = base ^ fnv1a64("ols:" + indicators[i]);
        try {
            ols_fits[i] = ols_simple(y, indicator_values[i], &weights, mp, &warnings);
        } catch (const NumericError& e) {
            warnings.add("ols fit for '" + indicators[i] + "' not computable: " + e.what());
        }
        mp.seed = base ^ fnv1a64("gwr:" + indicators[i]);
        GwrConfig gc;
        gc.neighbor_count = k;
        try {
            gwr_fits[i] = gwr_fit(y, indicator_values[i], xs, ys, gc, &weights, mp, warnings);
        } catch (const NumericError& e) {
            warnings.add("gwr fit for '" + indicators[i] + "' not computable: " + e.what());
        }
    }

    auto family_rows = [&](const std::vector<std::optional<SpatialFit>>& fits,
                           const char* model_name) {
        std::vector<std::pair<std::string, const SpatialFit*>> pairs;
        for (std::size_t i = 0; i < indicators.size(); ++i)
            if (fits[i]) pairs.emplace_back(indicators[i], &*fits[i]);
        std::vector<ModelReportRow> rows;
        if (!pairs.empty()) rows = compare_models(pairs);
        for (std::size_t i = 0; i < indicators.size(); ++i) {
            if (fits[i]) continue;
            ModelReportRow r;
            r.indicator = indicators[i];
            r.model = model_name;
            r.computed = false;
            rows.push_back(std::move(r));
        }
        return rows;
    };

    ValidateOutputs out;
    out.indicators = indicators;
    out.gwr_rows = family_rows(gwr_fits, "gwr");
    out.ols_rows = family_rows(ols_fits, "ols");

    OutputCollector files{config.output_dir};
    out.report_path =
        files.write("validation_report.csv", validation_report_csv(out.gwr_rows, out.ols_rows, d));

    {
        CsvTable locals;
        locals.header = {"indicator", "unit_id", "intercept", "slope",
                         "fitted",    "residual", "std_residual"};
        for (std::size_t i = 0; i < indicators.size(); ++i) {
            if (!gwr_fits[i]) continue;
            const SpatialFit& f = *gwr_fits[i];
            for (std::size_t u = 0; u < n; ++u)
                locals.rows.push_back({indicators[i], units[u], fmt(f.local_intercepts[u]),
                                       fmt(f.local_slopes[u]), fmt(f.fitted[u]),
                                       fmt(f.residuals[u]), fmt(f.std_residuals[u])});
        }
        files.write("local_coefficients.csv",
                    to_csv(locals, d, "# geoses gwr local coefficients\n"));
    }

    if (geometry_doc) {
        std::map<std::string, std::size_t> row_of;
        for (std::size_t i = 0; i < n; ++i) row_of[units[i]] = i;
        json fc;
        fc["type"] = "FeatureCollection";
        fc["features"] = json::array();
        for (const auto& feature : (*geometry_doc)["features"]) {
            const json& idv = feature["properties"][config.unit_id_property];
            std::string id = idv.is_string() ? idv.get<std::string>() : idv.dump();
            auto it = row_of.find(id);
            if (it == row_of.end()) continue;
            std::size_t u = it->second;
            json f = feature;
            json props;
            props[config.unit_id_property] = id;
            props["outcome"] = y[u];
            for (std::size_t i = 0; i < indicators.size(); ++i) {
                props[indicators[i]] = indicator_values[i][u];
                if (gwr_fits[i]) {
                    props["fitted_" + indicators[i]] = gwr_fits[i]->fitted[u];
                    props["std_residual_" + indicators[i]] = gwr_fits[i]->std_residuals[u];
                }
            }
            f["properties"] = std::move(props);
            fc["features"].push_back(std::move(f));
        }
        files.write("validated.geojson", fc.dump(1) + "\n");
    }

    {
        json manifest;
        manifest["tool"] = tool_info();
        manifest["run"] = {{"command", "validate"}, {"started", utc_timestamp()}};
        manifest["config"] = config_snapshot(config);
        json inputs;
        inputs["scores"] = input_entry(config.effective_scores_path());
        inputs["outcome"] = input_entry(config.outcome_path);
        inputs["coordinates"] = input_entry(config.coordinates_path);
        if (!config.geometry_path.empty()) inputs["geometry"] = input_entry(config.geometry_path);
        if (!config.adjacency_path.empty())
            inputs["adjacency"] = input_entry(config.adjacency_path);
        manifest["inputs"] = inputs;
        manifest["indicators"] = indicators;
        json jw = json::array();
        for (const auto& m : warnings.messages) jw.push_back(m);
        manifest["warnings"] = std::move(jw);
        manifest["outputs"] = files.hashes;
        write_file(config.output_dir + "/validation_manifest.json", manifest.dump(2) + "\n");
    }

    emit_warnings(warnings, diag);
    std::string best = "(none)";
    for (const auto& r : out.gwr_rows)
        if (r.computed && r.best_fit) {
            best = r.indicator;
            break;
        }
    diag << "validate: " << indicators.size() << " indicators x " << n
         << " units; best gwr fit: " << best << "\n";
    return out;
}

// ---------------------------------------------------------------------------
// render-map
// ---------------------------------------------------------------------------

RenderMapOutputs cmd_render_map(const RunConfig& config, std::ostream& diag) {
    if (config.geometry_path.empty()) throw ConfigError("render-map: geometry file required");
    char d = config.delim();
    CsvTable scores = read_csv(config.effective_scores_path(), d);
    PolygonSet polygons = load_geojson(read_file(config.geometry_path), config.unit_id_property,
                                       config.geometry_path);

    RenderMapOutputs out;
    std::string html = render_map_html(scores, polygons, config.palette, "geoses index map",
                                       out.missing_geometry, out.layers);
    out.html_path = config.output_dir + "/map.html";
    write_file(out.html_path, html);

    for (const auto& id : out.missing_geometry)
        diag << "warning: no geometry for unit " << id << "\n";
    diag << "render-map: " << out.layers.size() << " layer(s) -> " << out.html_path << "\n";
    return out;
}

// ---------------------------------------------------------------------------
// dump-diagnostics
// ---------------------------------------------------------------------------

std::string cmd_dump_diagnostics(const RunConfig& config) {
    json manifest;
    try {
        manifest = json::parse(read_file(config.effective_manifest_path()));
    } catch (const json::exception& e) {
        throw ParseError(config.effective_manifest_path() + ": " + e.what());
    }
    if (!manifest.contains("stages"))
        throw DataError(config.effective_manifest_path() + ": no stage diagnostics (not a "
                        "build-index manifest?)");
    const json& stages = manifest["stages"];

    CsvTable out;
    out.header = {"stage", "group", "kind", "name", "value"};
    auto add_summary = [&](const std::string& stage, const std::string& group, const json& js) {
        const auto& vars = js["variables"];
        std::size_t i = 0;
        for (const auto& ev : js["eigenvalues"])
            out.rows.push_back({stage, group, "eigenvalue", std::to_string(++i),
                                fmt(ev.get<double>())});
        out.rows.push_back({stage, group, "components_kept", "",
                            std::to_string(js["components_kept"].get<std::size_t>())});
        for (std::size_t v = 0; v < vars.size(); ++v)
            out.rows.push_back({stage, group, "first_loading", vars[v].get<std::string>(),
                                fmt(js["first_loadings"][v].get<double>())});
        if (js.contains("selected"))
            for (const auto& s : js["selected"])
                out.rows.push_back({stage, group, "selected", s.get<std::string>(), ""});
    };
    for (auto it = stages["stage1"].begin(); it != stages["stage1"].end(); ++it)
        add_summary("stage1", it.key(), it.value());
    add_summary("stage2", "", stages["stage2"]);
    add_summary("stage3", "", stages["stage3"]);
    if (!stages["cronbach_alpha"].is_null())
        out.rows.push_back({"index", "", "cronbach_alpha", "",
                            fmt(stages["cronbach_alpha"].get<double>())});
    return to_csv(out, config.delim(), "# geoses pca diagnostics\n");
}

}  // namespace geoses
