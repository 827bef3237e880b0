#include "geoses/catalog.hpp"

#include <set>

#include <json.hpp>

#include "geoses/error.hpp"
#include "geoses/util.hpp"

namespace geoses {

using nlohmann::json;

std::string to_string(VariableKind k) {
    switch (k) {
        case VariableKind::percentage: return "percentage";
        case VariableKind::weighted_mean: return "weighted_mean";
        case VariableKind::ice_ratio: return "ice_ratio";
    }
    return "unknown";
}

std::string to_string(PolarityHint p) {
    switch (p) {
        case PolarityHint::favorable: return "favorable";
        case PolarityHint::unfavorable: return "unfavorable";
        case PolarityHint::neutral: return "neutral";
    }
    return "unknown";
}

namespace {

VariableKind parse_kind(const std::string& s, const std::string& where) {
    if (s == "percentage") return VariableKind::percentage;
    if (s == "weighted_mean") return VariableKind::weighted_mean;
    if (s == "ice_ratio") return VariableKind::ice_ratio;
    throw ConfigError(where + ": unknown kind '" + s + "'");
}

PolarityHint parse_polarity(const std::string& s, const std::string& where) {
    if (s == "favorable") return PolarityHint::favorable;
    if (s == "unfavorable") return PolarityHint::unfavorable;
    if (s == "neutral") return PolarityHint::neutral;
    throw ConfigError(where + ": unknown polarity_hint '" + s + "'");
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw ConfigError(where + ": unknown field '" + it.key() + "'");
    }
}

}  // namespace

std::size_t VariableCatalog::variable_count() const {
    std::size_t n = 0;
    for (const auto& d : dimensions) n += d.variables.size();
    return n;
}

std::vector<std::string> VariableCatalog::variable_names() const {
    std::vector<std::string> names;
    names.reserve(variable_count());
    for (const auto& d : dimensions)
        for (const auto& v : d.variables) names.push_back(v.name);
    return names;
}

const VariableDef* VariableCatalog::find_variable(const std::string& vname) const {
    for (const auto& d : dimensions)
        for (const auto& v : d.variables)
            if (v.name == vname) return &v;
    return nullptr;
}

const Dimension* VariableCatalog::dimension_of(const std::string& variable) const {
    for (const auto& d : dimensions)
        for (const auto& v : d.variables)
            if (v.name == variable) return &d;
    return nullptr;
}

void VariableCatalog::validate() const {
    if (dimensions.empty()) throw ConfigError("catalog: no dimensions");
    std::set<std::string> dim_names;
    std::set<std::string> var_names;
    for (const auto& d : dimensions) {
        if (d.name.empty()) throw ConfigError("catalog: dimension with empty name");
        if (!dim_names.insert(d.name).second)
            throw ConfigError("catalog: duplicate dimension '" + d.name + "'");
        if (d.variables.empty()) throw ConfigError("catalog: dimension '" + d.name + "' is empty");
        for (const auto& v : d.variables) {
            if (v.name.empty())
                throw ConfigError("catalog: variable with empty name in dimension '" + d.name +
                                  "'");
            if (!var_names.insert(v.name).second)
                throw ConfigError("catalog: duplicate variable name '" + v.name + "'");
            if (v.kind == VariableKind::ice_ratio && !d.segregation_style)
                throw ConfigError("catalog: ice_ratio variable '" + v.name +
                                  "' in dimension '" + d.name +
                                  "' which is not flagged segregation_style");
        }
    }
}

VariableCatalog load_catalog(const std::string& json_text, const std::string& context) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(context + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError(context + ": top level must be an object");
    reject_unknown_keys(doc, {"name", "version", "dimensions"}, context);

    VariableCatalog cat;
    cat.name = doc.value("name", "");
    cat.version = doc.value("version", "");
    if (!doc.contains("dimensions") || !doc["dimensions"].is_array())
        throw ConfigError(context + ": 'dimensions' array required");
    for (const auto& jd : doc["dimensions"]) {
        if (!jd.is_object()) throw ConfigError(context + ": dimension entries must be objects");
        reject_unknown_keys(jd, {"name", "segregation_style", "variables"}, context);
        Dimension dim;
        dim.name = jd.value("name", "");
        dim.segregation_style = jd.value("segregation_style", false);
        std::string where = context + ": dimension '" + dim.name + "'";
        if (!jd.contains("variables") || !jd["variables"].is_array())
            throw ConfigError(where + ": 'variables' array required");
        for (const auto& jv : jd["variables"]) {
            if (!jv.is_object()) throw ConfigError(where + ": variable entries must be objects");
            reject_unknown_keys(jv, {"name", "kind", "description", "polarity_hint"}, where);
            VariableDef v;
            v.name = jv.value("name", "");
            if (!jv.contains("kind"))
                throw ConfigError(where + ": variable '" + v.name + "' missing kind");
            v.kind = parse_kind(jv["kind"].get<std::string>(), where + "/" + v.name);
            v.description = jv.value("description", "");
            if (jv.contains("polarity_hint"))
                v.polarity_hint =
                    parse_polarity(jv["polarity_hint"].get<std::string>(), where + "/" + v.name);
            dim.variables.push_back(std::move(v));
        }
        cat.dimensions.push_back(std::move(dim));
    }
    cat.validate();
    return cat;
}

VariableCatalog load_catalog_file(const std::string& path) {
    return load_catalog(read_file(path), path);
}

std::string save_catalog(const VariableCatalog& catalog) {
    json doc;
    doc["name"] = catalog.name;
    doc["version"] = catalog.version;
    doc["dimensions"] = json::array();
    for (const auto& d : catalog.dimensions) {
        json jd;
        jd["name"] = d.name;
        if (d.segregation_style) jd["segregation_style"] = true;
        jd["variables"] = json::array();
        for (const auto& v : d.variables) {
            json jv;
            jv["name"] = v.name;
            jv["kind"] = to_string(v.kind);
            if (!v.description.empty()) jv["description"] = v.description;
            jv["polarity_hint"] = to_string(v.polarity_hint);
            jd["variables"].push_back(std::move(jv));
        }
        doc["dimensions"].push_back(std::move(jd));
    }
    return doc.dump(2) + "\n";
}

VariableCatalog bundled_catalog() { return load_catalog(bundled_catalog_text(), "bundled catalog"); }

std::string catalog_hash_hex(const VariableCatalog& catalog) {
    return fnv1a64_hex(save_catalog(catalog));
}

}  // namespace geoses
