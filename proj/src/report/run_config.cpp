#include <json.hpp>

#include "geoses/report.hpp"
#include "geoses/util.hpp"

namespace geoses {

using nlohmann::json;

std::string to_string(Scale s) {
    switch (s) {
        case Scale::national: return "national";
        case Scale::state: return "state";
        case Scale::intramunicipal: return "intramunicipal";
    }
    return "unknown";
}

Scale parse_scale(const std::string& s) {
    if (s == "national") return Scale::national;
    if (s == "state") return Scale::state;
    if (s == "intramunicipal") return Scale::intramunicipal;
    throw ConfigError("scale must be national, state, or intramunicipal (got '" + s + "')");
}

char RunConfig::delim() const {
    if (delimiter == "\\t" || delimiter == "tab") return '\t';
    if (delimiter.size() != 1) throw ConfigError("delimiter must be a single character");
    return delimiter[0];
}

int RunConfig::effective_gwr_k() const {
    if (gwr_neighbor_count > 0) return gwr_neighbor_count;
    return scale == Scale::intramunicipal ? 30 : 53;
}

std::string RunConfig::effective_scores_path() const {
    return scores_path.empty() ? output_dir + "/geoses_scores.csv" : scores_path;
}

std::string RunConfig::effective_manifest_path() const {
    return manifest_path.empty() ? output_dir + "/manifest.json" : manifest_path;
}

void apply_config_json(RunConfig& config, const std::string& json_text,
                       const std::string& context) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(context + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError(context + ": config must be a JSON object");

    auto str = [&](const char* key, std::string& target) {
        if (doc.contains(key)) target = doc[key].get<std::string>();
    };
    str("catalog", config.catalog_path);
    str("mapping", config.mapping_path);
    str("persons", config.persons_path);
    str("households", config.households_path);
    str("coordinates", config.coordinates_path);
    str("geometry", config.geometry_path);
    str("adjacency", config.adjacency_path);
    str("outcome", config.outcome_path);
    str("reference", config.reference_path);
    str("scores", config.scores_path);
    str("manifest", config.manifest_path);
    str("delimiter", config.delimiter);
    str("unit_id_property", config.unit_id_property);
    str("palette", config.palette);
    str("output_dir", config.output_dir);

    if (doc.contains("scale")) config.scale = parse_scale(doc["scale"].get<std::string>());
    if (doc.contains("missing_policy")) {
        std::string p = doc["missing_policy"].get<std::string>();
        if (p == "drop_unit")
            config.missing_policy = MissingPolicy::drop_unit;
        else if (p == "impute_region_mean")
            config.missing_policy = MissingPolicy::impute_region_mean;
        else
            throw ConfigError(context + ": missing_policy must be drop_unit or impute_region_mean");
    }
    if (doc.contains("shift_constant"))
        config.pipeline.shift_constant = doc["shift_constant"].get<double>();
    if (doc.contains("variance_threshold"))
        config.pipeline.variance_threshold = doc["variance_threshold"].get<double>();
    if (doc.contains("orientation_variable"))
        config.pipeline.orientation_variable = doc["orientation_variable"].get<std::string>();
    if (doc.contains("gwr_neighbors")) config.gwr_neighbor_count = doc["gwr_neighbors"].get<int>();
    if (doc.contains("permutations")) config.permutations = doc["permutations"].get<int>();
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("moran_side")) {
        std::string s = doc["moran_side"].get<std::string>();
        if (s == "one_sided")
            config.moran_side = MoranSidedness::one_sided;
        else if (s == "two_sided")
            config.moran_side = MoranSidedness::two_sided;
        else
            throw ConfigError(context + ": moran_side must be one_sided or two_sided");
    }

    static const std::set<std::string> known = {
        "catalog",     "mapping",     "persons",          "households",
        "coordinates", "geometry",    "adjacency",        "outcome",
        "reference",   "scores",      "manifest",         "delimiter",
        "unit_id_property",           "palette",          "output_dir",
        "scale",       "missing_policy",                  "shift_constant",
        "variance_threshold",         "orientation_variable",
        "gwr_neighbors",              "permutations",     "seed",
        "moran_side"};
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError(context + ": unknown config field '" + it.key() + "'");
}

RunConfig load_run_config_file(const std::string& path) {
    RunConfig config;
    apply_config_json(config, read_file(path), path);
    return config;
}

}  // namespace geoses
