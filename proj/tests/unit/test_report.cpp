#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "geoses/report.hpp"
#include "geoses/rng.hpp"
#include "geoses/synth.hpp"
#include "geoses/util.hpp"

using namespace geoses;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("geoses_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p.string();
}

struct Fixture {
    std::string data_dir;
    RunConfig config;

    explicit Fixture(const std::string& tag, int grid = 4) {
        data_dir = temp_dir(tag + "_data");
        SynthConfig sc;
        sc.grid_side = grid;
        sc.persons_per_unit = 120;
        sc.households_per_unit = 80;
        sc.seed = 1234;
        write_synthetic_dataset(data_dir, sc);

        config.mapping_path = data_dir + "/mapping.json";
        config.persons_path = data_dir + "/persons.csv";
        config.households_path = data_dir + "/households.csv";
        config.coordinates_path = data_dir + "/coordinates.csv";
        config.geometry_path = data_dir + "/geometry.geojson";
        config.outcome_path = data_dir + "/outcome.csv";
        config.output_dir = temp_dir(tag + "_out");
        config.gwr_neighbor_count = 6;
        config.permutations = 99;
        config.seed = 555;
    }
};

std::map<std::string, std::string> dir_contents(const std::string& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        files[entry.path().filename().string()] = read_file(entry.path().string());
    return files;
}

}  // namespace

TEST_CASE("cmd_build_index writes scores, area table, and manifest") {
    Fixture fx("build");
    std::ostringstream diag;
    auto out = cmd_build_index(fx.config, diag);

    CHECK(fs::exists(out.scores_path));
    CHECK(fs::exists(out.area_table_path));
    CHECK(fs::exists(out.manifest_path));
    CHECK(out.result.unit_ids.size() == 16);

    CsvTable scores = read_csv(out.scores_path);
    CHECK(scores.rows.size() == 16);
    CHECK(scores.header[0] == "unit_id");
    CHECK(scores.header[1] == "geoses");
    for (const auto& row : scores.rows) {
        double v = parse_double(row[1], "geoses");
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }
    // inactive dimensions have no column
    for (const auto& inactive : out.result.inactive_dimensions)
        CHECK(!scores.has_column(inactive));
    for (const auto& d : out.result.dimensions) {
        CHECK(scores.has_column(d.dimension));
        CHECK(scores.has_column(d.dimension + "_raw"));
    }
}

TEST_CASE("cmd_build_index: missing coordinate names the unit, nonzero class") {
    Fixture fx("badcoords");
    // drop the last coordinate row
    std::string text = read_file(fx.config.coordinates_path);
    text = text.substr(0, text.rfind("U16"));
    write_file(fx.config.coordinates_path, text);
    std::ostringstream diag;
    try {
        cmd_build_index(fx.config, diag);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("U16") != std::string::npos);
        CHECK(static_cast<int>(e.code()) == 4);
    }
}

TEST_CASE("build-index reruns are byte-identical") {
    Fixture fx("determinism");
    setenv("SOURCE_DATE_EPOCH", "0", 1);
    std::ostringstream diag;
    cmd_build_index(fx.config, diag);
    auto first = dir_contents(fx.config.output_dir);
    fs::remove_all(fx.config.output_dir);
    cmd_build_index(fx.config, diag);
    auto second = dir_contents(fx.config.output_dir);
    unsetenv("SOURCE_DATE_EPOCH");
    CHECK(first == second);
}

TEST_CASE("cmd_validate: one row per indicator with the table layout") {
    Fixture fx("validate");
    std::ostringstream diag;
    auto build = cmd_build_index(fx.config, diag);
    auto val = cmd_validate(fx.config, diag);

    std::size_t expected_rows = 1 + build.result.dimensions.size();
    CHECK(val.indicators.size() == expected_rows);
    CHECK(val.gwr_rows.size() == expected_rows);
    CHECK(val.ols_rows.size() == expected_rows);

    CsvTable report = read_csv(val.report_path);
    CHECK(report.header ==
          std::vector<std::string>{"model", "indicator", "r2_global_adjusted", "aicc", "moran_i",
                                   "moran_p", "best_fit", "spatial_dependence"});
    CHECK(report.rows.size() == 2 * expected_rows);

    // exactly one best-fit marker per computed block; aicc ascending
    int best = 0;
    double prev = -1e300;
    for (const auto& row : report.rows) {
        if (row[0] != "gwr") continue;
        if (row[6] == "*") ++best;
        if (row[3] != "--") {
            double aicc = parse_double(row[3], "aicc");
            CHECK(aicc >= prev);
            prev = aicc;
        }
    }
    CHECK(best == 1);

    // indicator set = geoses + active dimensions
    std::set<std::string> inds(val.indicators.begin(), val.indicators.end());
    CHECK(inds.count("geoses"));
    for (const auto& d : build.result.dimensions) CHECK(inds.count(d.dimension));
    for (const auto& inactive : build.result.inactive_dimensions) CHECK(!inds.count(inactive));

    CHECK(fs::exists(fx.config.output_dir + "/local_coefficients.csv"));
    CHECK(fs::exists(fx.config.output_dir + "/validated.geojson"));
}

TEST_CASE("cmd_validate: seeded p-values replay exactly") {
    Fixture fx("valseed");
    std::ostringstream diag;
    cmd_build_index(fx.config, diag);
    auto v1 = cmd_validate(fx.config, diag);
    auto v2 = cmd_validate(fx.config, diag);
    REQUIRE(v1.gwr_rows.size() == v2.gwr_rows.size());
    for (std::size_t i = 0; i < v1.gwr_rows.size(); ++i) {
        CHECK(v1.gwr_rows[i].indicator == v2.gwr_rows[i].indicator);
        if (v1.gwr_rows[i].moran_p)
            CHECK(*v1.gwr_rows[i].moran_p == *v2.gwr_rows[i].moran_p);
    }
}

TEST_CASE("cmd_validate: misaligned outcome units produce a diff") {
    Fixture fx("valbad");
    std::ostringstream diag;
    cmd_build_index(fx.config, diag);
    std::string text = read_file(fx.config.outcome_path);
    text = text.substr(0, text.rfind("U16")) + "U99,0.5\n";
    write_file(fx.config.outcome_path, text);
    try {
        cmd_validate(fx.config, diag);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        std::string msg = e.what();
        CHECK(msg.find("U16") != std::string::npos);
        CHECK(msg.find("U99") != std::string::npos);
    }
}

TEST_CASE("cmd_validate: seed required with permutations") {
    Fixture fx("valseedreq");
    fx.config.seed.reset();
    std::ostringstream diag;
    CHECK_THROWS_AS(cmd_validate(fx.config, diag), ConfigError);
}

TEST_CASE("cmd_render_map: values match the export strings; layer set") {
    Fixture fx("render");
    std::ostringstream diag;
    auto build = cmd_build_index(fx.config, diag);
    auto render = cmd_render_map(fx.config, diag);

    std::string html = read_file(render.html_path);
    CsvTable scores = read_csv(build.scores_path);

    // every exported number appears verbatim in the HTML payload
    for (const auto& row : scores.rows)
        for (std::size_t j = 1; j < row.size(); ++j)
            CHECK(html.find("\"" + row[j] + "\"") != std::string::npos);

    // one layer per non-raw column; the index layer always present
    CHECK(render.layers.front() == "geoses");
    for (const auto& inactive : build.result.inactive_dimensions) {
        for (const auto& layer : render.layers) CHECK(layer != inactive);
    }
    CHECK(render.missing_geometry.empty());
    CHECK(html.find("geoses") != std::string::npos);
}

TEST_CASE("cmd_render_map: units without geometry are reported in the file") {
    Fixture fx("rendermissing");
    std::ostringstream diag;
    cmd_build_index(fx.config, diag);
    // remove one feature from the geometry
    std::string text = read_file(fx.config.geometry_path);
    auto pos = text.find("\"U16\"");
    auto start = text.rfind('{', text.rfind("\"type\": \"Feature\"", pos));
    // simpler: rebuild the collection without the last feature via string ops
    // on the known generator layout
    (void)start;
    nlohmann::json doc = nlohmann::json::parse(text);
    doc["features"].erase(doc["features"].size() - 1);
    write_file(fx.config.geometry_path, doc.dump(1));

    auto render = cmd_render_map(fx.config, diag);
    REQUIRE(render.missing_geometry.size() == 1);
    CHECK(render.missing_geometry[0] == "U16");
    std::string html = read_file(render.html_path);
    CHECK(html.find("\"missing_geometry\": [") != std::string::npos);
    CHECK(html.find("U16") != std::string::npos);
}

TEST_CASE("dump-diagnostics emits eigenvalues and loadings") {
    Fixture fx("dump");
    std::ostringstream diag;
    cmd_build_index(fx.config, diag);
    std::string text = cmd_dump_diagnostics(fx.config);
    CsvTable t = parse_csv(text, ',', "dump");
    CHECK(t.header == std::vector<std::string>{"stage", "group", "kind", "name", "value"});
    bool has_eigen = false, has_loading = false, has_selected = false;
    for (const auto& row : t.rows) {
        if (row[2] == "eigenvalue") has_eigen = true;
        if (row[2] == "first_loading") has_loading = true;
        if (row[2] == "selected") has_selected = true;
    }
    CHECK(has_eigen);
    CHECK(has_loading);
    CHECK(has_selected);
}

TEST_CASE("run config file with flag-style overrides") {
    std::string dir = temp_dir("config");
    write_file(dir + "/run.json", R"({
      "mapping": "m.json", "persons": "p.csv", "scale": "intramunicipal",
      "shift_constant": 25, "permutations": 499, "seed": 9,
      "missing_policy": "impute_region_mean"
    })");
    RunConfig cfg = load_run_config_file(dir + "/run.json");
    CHECK(cfg.mapping_path == "m.json");
    CHECK(cfg.scale == Scale::intramunicipal);
    CHECK(cfg.effective_gwr_k() == 30);
    CHECK(cfg.pipeline.shift_constant == 25.0);
    CHECK(cfg.permutations == 499);
    CHECK(cfg.seed == 9);
    CHECK(cfg.missing_policy == MissingPolicy::impute_region_mean);

    write_file(dir + "/bad.json", R"({"surprise": 1})");
    CHECK_THROWS_AS(load_run_config_file(dir + "/bad.json"), ConfigError);
}

TEST_CASE("scale default neighbor counts") {
    RunConfig cfg;
    cfg.scale = Scale::national;
    CHECK(cfg.effective_gwr_k() == 53);
    cfg.scale = Scale::state;
    CHECK(cfg.effective_gwr_k() == 53);
    cfg.scale = Scale::intramunicipal;
    CHECK(cfg.effective_gwr_k() == 30);
    cfg.gwr_neighbor_count = 12;
    CHECK(cfg.effective_gwr_k() == 12);
}

TEST_CASE("reference correlations export has the table layout") {
    Fixture fx("reference");
    // reference = outcome file renamed columns (any numeric column works)
    std::string ref_path = fx.data_dir + "/reference.csv";
    {
        CsvTable oc = read_csv(fx.config.outcome_path);
        CsvTable ref;
        ref.header = {"unit_id", "IDHM"};
        for (auto& row : oc.rows) ref.rows.push_back({row[0], row[1]});
        write_file(ref_path, to_csv(ref));
    }
    fx.config.reference_path = ref_path;
    std::ostringstream diag;
    auto build = cmd_build_index(fx.config, diag);
    std::string path = fx.config.output_dir + "/reference_correlations.csv";
    REQUIRE(fs::exists(path));
    CsvTable cm = read_csv(path);
    CHECK(cm.header.size() == cm.rows.size() + 1);
    CHECK(cm.header[1] == "geoses");
    CHECK(cm.rows[0][1] == "1");  // self-correlation
    CHECK(cm.header.back() == "IDHM");
    // upper triangle left blank
    CHECK(cm.rows[0].back() == "");
    (void)build;
}

TEST_CASE("csv: quoting round-trip") {
    CsvTable t;
    t.header = {"unit_id", "note"};
    t.rows = {{"a,1", "says \"hi\""}, {"plain", "multi\nline"}};
    std::string text = to_csv(t, ',');
    CsvTable back = parse_csv(text, ',', "roundtrip");
    CHECK(back.header == t.header);
    CHECK(back.rows[0] == t.rows[0]);  // delimiter and quotes survive
}

TEST_CASE("cmd_validate: an outcome tracking the index ranks the index best") {
    Fixture fx("affine", 6);
    std::ostringstream diag;
    auto build = cmd_build_index(fx.config, diag);

    // outcome = affine function of the index plus faint noise
    {
        CsvTable oc;
        oc.header = {"unit_id", "outcome"};
        Rng rng(17);
        for (std::size_t i = 0; i < build.result.unit_ids.size(); ++i)
            oc.rows.push_back({build.result.unit_ids[i],
                               format_double(0.7 - 0.5 * build.result.scores[i] +
                                                 1e-4 * rng.normal(),
                                             12)});
        write_file(fx.config.outcome_path, to_csv(oc));
    }
    fx.config.gwr_neighbor_count = 10;
    auto val = cmd_validate(fx.config, diag);

    const ModelReportRow* index_row = nullptr;
    for (const auto& r : val.ols_rows)
        if (r.indicator == "geoses") index_row = &r;
    REQUIRE(index_row);
    CHECK(index_row->computed);
    CHECK(index_row->best_fit);
    CHECK(index_row->r2_adjusted > 0.999);
    // iid noise residuals carry no spatial structure
    REQUIRE(index_row->moran_i.has_value());
    CHECK(std::abs(*index_row->moran_i) < 0.25);
}
