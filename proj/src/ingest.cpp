#include "geoses/ingest.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "geoses/csv.hpp"
#include "geoses/kernels.hpp"
#include "geoses/stats.hpp"
#include "geoses/util.hpp"

namespace geoses {

using nlohmann::json;

std::size_t RecordTable::attr_index(const std::string& name) const {
    auto it = std::find(attr_names.begin(), attr_names.end(), name);
    if (it == attr_names.end()) throw ConfigError("unknown attribute '" + name + "'");
    return static_cast<std::size_t>(it - attr_names.begin());
}

bool RecordTable::is_missing(std::size_t attr, std::size_t record) const {
    const std::string& v = attr_values[attr][record];
    return v.empty() || missing_codes.count(v) > 0;
}

double RecordTable::numeric(std::size_t attr, std::size_t record) const {
    return parse_double(attr_values[attr][record], "attribute " + attr_names[attr]);
}

RecordTable load_records(const std::string& text, char delimiter,
                         const std::set<std::string>& missing_codes, const std::string& context) {
    CsvTable csv = parse_csv(text, delimiter, context);
    std::size_t unit_col = csv.column("unit_id");
    std::size_t weight_col = csv.column("weight");

    RecordTable t;
    t.missing_codes = missing_codes;
    for (std::size_t j = 0; j < csv.header.size(); ++j)
        if (j != unit_col && j != weight_col) t.attr_names.push_back(csv.header[j]);
    t.attr_values.resize(t.attr_names.size());

    std::size_t n = csv.rows.size();
    t.unit_ids.reserve(n);
    t.weights.reserve(n);
    for (auto& col : t.attr_values) col.reserve(n);

    for (std::size_t r = 0; r < n; ++r) {
        auto& row = csv.rows[r];
        std::string line_ref = context + " record " + std::to_string(r + 1);
        if (row[unit_col].empty()) throw ParseError(line_ref + ": empty unit_id");
        double w = parse_double(row[weight_col], line_ref + " weight");
        if (!(w > 0.0)) throw ParseError(line_ref + ": weight must be > 0");
        t.unit_ids.push_back(row[unit_col]);
        t.weights.push_back(w);
        std::size_t a = 0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j == unit_col || j == weight_col) continue;
            t.attr_values[a++].push_back(std::move(row[j]));
        }
    }
    return t;
}

RecordTable load_records_file(const std::string& path, char delimiter,
                              const std::set<std::string>& missing_codes) {
    return load_records(read_file(path), delimiter, missing_codes, path);
}

// ---------------------------------------------------------------------------
// Conditions
// ---------------------------------------------------------------------------

namespace {

ConditionSpec parse_condition_json(const json& j, const std::string& context);

ConditionSpec parse_comparison(const json& j, ConditionSpec::Op op, const json& operand,
                               const std::string& context) {
    ConditionSpec spec;
    spec.op = op;
    if (!j.contains("attr") || !j["attr"].is_string())
        throw ConfigError(context + ": comparison requires string 'attr'");
    spec.attr = j["attr"].get<std::string>();
    if (operand.is_number()) {
        spec.num_value = operand.get<double>();
    } else if (operand.is_object() && operand.contains("threshold") &&
               operand["threshold"].is_string() && operand.size() == 1) {
        spec.threshold_ref = operand["threshold"].get<std::string>();
    } else {
        throw ConfigError(context + ": comparison operand must be a number or {\"threshold\": name}");
    }
    return spec;
}

ConditionSpec parse_condition_json(const json& j, const std::string& context) {
    if (!j.is_object()) throw ConfigError(context + ": condition must be an object");

    static const std::set<std::string> known = {"const", "attr", "present", "eq", "in",
                                                "gt",    "ge",   "lt",      "le", "all",
                                                "any",   "not"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError(context + ": unknown condition field '" + it.key() + "'");

    ConditionSpec spec;
    if (j.contains("const")) {
        spec.op = ConditionSpec::Op::always;
        spec.const_value = j["const"].get<bool>();
        return spec;
    }
    if (j.contains("all") || j.contains("any")) {
        bool is_all = j.contains("all");
        spec.op = is_all ? ConditionSpec::Op::all_of : ConditionSpec::Op::any_of;
        const json& arr = is_all ? j["all"] : j["any"];
        if (!arr.is_array() || arr.empty())
            throw ConfigError(context + ": 'all'/'any' requires a non-empty array");
        for (const auto& c : arr) spec.children.push_back(parse_condition_json(c, context));
        return spec;
    }
    if (j.contains("not")) {
        spec.op = ConditionSpec::Op::negate;
        spec.children.push_back(parse_condition_json(j["not"], context));
        return spec;
    }
    if (j.contains("present")) {
        spec.op = ConditionSpec::Op::present;
        if (!j.contains("attr")) throw ConfigError(context + ": 'present' requires 'attr'");
        spec.attr = j["attr"].get<std::string>();
        if (!j["present"].get<bool>()) spec.op = ConditionSpec::Op::negate;  // rare, explicit
        if (spec.op == ConditionSpec::Op::negate) {
            ConditionSpec inner;
            inner.op = ConditionSpec::Op::present;
            inner.attr = spec.attr;
            spec.attr.clear();
            spec.children.push_back(std::move(inner));
        }
        return spec;
    }
    if (j.contains("eq")) {
        spec.op = ConditionSpec::Op::eq;
        if (!j.contains("attr")) throw ConfigError(context + ": 'eq' requires 'attr'");
        spec.attr = j["attr"].get<std::string>();
        if (j["eq"].is_string())
            spec.str_value = j["eq"].get<std::string>();
        else if (j["eq"].is_number_integer())
            spec.str_value = std::to_string(j["eq"].get<long long>());
        else
            throw ConfigError(context + ": 'eq' operand must be a string or integer");
        return spec;
    }
    if (j.contains("in")) {
        spec.op = ConditionSpec::Op::in_set;
        if (!j.contains("attr")) throw ConfigError(context + ": 'in' requires 'attr'");
        spec.attr = j["attr"].get<std::string>();
        if (!j["in"].is_array() || j["in"].empty())
            throw ConfigError(context + ": 'in' requires a non-empty array");
        for (const auto& v : j["in"]) {
            if (v.is_string())
                spec.set_values.push_back(v.get<std::string>());
            else if (v.is_number_integer())
                spec.set_values.push_back(std::to_string(v.get<long long>()));
            else
                throw ConfigError(context + ": 'in' values must be strings or integers");
        }
        return spec;
    }
    if (j.contains("gt")) return parse_comparison(j, ConditionSpec::Op::gt, j["gt"], context);
    if (j.contains("ge")) return parse_comparison(j, ConditionSpec::Op::ge, j["ge"], context);
    if (j.contains("lt")) return parse_comparison(j, ConditionSpec::Op::lt, j["lt"], context);
    if (j.contains("le")) return parse_comparison(j, ConditionSpec::Op::le, j["le"], context);
    throw ConfigError(context + ": empty condition");
}

}  // namespace

ConditionSpec parse_condition(const std::string& json_text, const std::string& context) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(context + ": " + e.what());
    }
    return parse_condition_json(j, context);
}

CompiledCondition CompiledCondition::compile(const ConditionSpec& spec, const RecordTable& records,
                                             const std::map<std::string, double>& thresholds,
                                             const std::string& context) {
    CompiledCondition cc;
    // depth-first flatten
    auto emit = [&](auto&& self, const ConditionSpec& s) -> std::size_t {
        std::size_t idx = cc.nodes_.size();
        cc.nodes_.emplace_back();
        Node node;
        node.op = s.op;
        node.const_value = s.const_value;
        node.str_value = s.str_value;
        node.set_values.insert(s.set_values.begin(), s.set_values.end());
        if (!s.attr.empty()) node.attr = records.attr_index(s.attr);
        switch (s.op) {
            case ConditionSpec::Op::gt:
            case ConditionSpec::Op::ge:
            case ConditionSpec::Op::lt:
            case ConditionSpec::Op::le:
                if (!s.threshold_ref.empty()) {
                    auto it = thresholds.find(s.threshold_ref);
                    if (it == thresholds.end())
                        throw ConfigError(context + ": unknown threshold '" + s.threshold_ref +
                                          "'");
                    node.num_value = it->second;
                } else {
                    node.num_value = s.num_value;
                }
                break;
            default: break;
        }
        cc.nodes_[idx] = std::move(node);
        for (const auto& child : s.children) {
            std::size_t cidx = self(self, child);
            cc.nodes_[idx].children.push_back(cidx);
        }
        return idx;
    };
    emit(emit, spec);
    return cc;
}

bool CompiledCondition::eval_node(std::size_t idx, const RecordTable& records,
                                  std::size_t record) const {
    const Node& n = nodes_[idx];
    switch (n.op) {
        case ConditionSpec::Op::always: return n.const_value;
        case ConditionSpec::Op::present: return !records.is_missing(n.attr, record);
        case ConditionSpec::Op::eq:
            return !records.is_missing(n.attr, record) &&
                   records.attr_values[n.attr][record] == n.str_value;
        case ConditionSpec::Op::in_set:
            return !records.is_missing(n.attr, record) &&
                   n.set_values.count(records.attr_values[n.attr][record]) > 0;
        case ConditionSpec::Op::gt:
        case ConditionSpec::Op::ge:
        case ConditionSpec::Op::lt:
        case ConditionSpec::Op::le: {
            if (records.is_missing(n.attr, record)) return false;
            double v = records.numeric(n.attr, record);
            switch (n.op) {
                case ConditionSpec::Op::gt: return v > n.num_value;
                case ConditionSpec::Op::ge: return v >= n.num_value;
                case ConditionSpec::Op::lt: return v < n.num_value;
                default: return v <= n.num_value;
            }
        }
        case ConditionSpec::Op::all_of:
            for (std::size_t c : n.children)
                if (!eval_node(c, records, record)) return false;
            return true;
        case ConditionSpec::Op::any_of:
            for (std::size_t c : n.children)
                if (eval_node(c, records, record)) return true;
            return false;
        case ConditionSpec::Op::negate: return !eval_node(n.children[0], records, record);
    }
    return false;
}

bool CompiledCondition::eval(const RecordTable& records, std::size_t record) const {
    if (nodes_.empty()) return true;
    return eval_node(0, records, record);
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

UnitIndex UnitIndex::from_ids(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    UnitIndex ui;
    ui.ids = std::move(ids);
    ui.position.reserve(ui.ids.size());
    for (std::size_t i = 0; i < ui.ids.size(); ++i) ui.position[ui.ids[i]] = i;
    return ui;
}

std::size_t UnitIndex::at(const std::string& id) const {
    auto it = position.find(id);
    if (it == position.end()) throw DataError("unknown unit '" + id + "'");
    return it->second;
}

AggregateColumn aggregate_percentage(const RecordTable& records, const CompiledCondition& pred,
                                     const CompiledCondition& denom, const UnitIndex& units) {
    std::size_t nu = units.ids.size();
    std::vector<kernels::Accum> num(nu), den(nu);
    for (std::size_t r = 0; r < records.n_records(); ++r) {
        if (!denom.eval(records, r)) continue;
        std::size_t u = units.at(records.unit_ids[r]);
        den[u].add(records.weights[r]);
        if (pred.eval(records, r)) num[u].add(records.weights[r]);
    }
    AggregateColumn out;
    out.values.assign(nu, 0.0);
    out.missing.assign(nu, 0);
    out.respondents.assign(nu, 0.0);
    for (std::size_t u = 0; u < nu; ++u) {
        double d = den[u].value();
        out.respondents[u] = d;
        if (d <= 0.0) {
            out.missing[u] = 1;
            continue;
        }
        out.values[u] = std::clamp(100.0 * num[u].value() / d, 0.0, 100.0);
    }
    return out;
}

AggregateColumn aggregate_weighted_mean(const RecordTable& records, std::size_t attr,
                                        const UnitIndex& units) {
    std::size_t nu = units.ids.size();
    std::vector<kernels::Accum> wx(nu), w(nu);
    for (std::size_t r = 0; r < records.n_records(); ++r) {
        if (records.is_missing(attr, r)) continue;
        std::size_t u = units.at(records.unit_ids[r]);
        double x = records.numeric(attr, r);
        w[u].add(records.weights[r]);
        wx[u].add(records.weights[r] * x);
    }
    AggregateColumn out;
    out.values.assign(nu, 0.0);
    out.missing.assign(nu, 0);
    out.respondents.assign(nu, 0.0);
    for (std::size_t u = 0; u < nu; ++u) {
        double d = w[u].value();
        out.respondents[u] = d;
        if (d <= 0.0) {
            out.missing[u] = 1;
            continue;
        }
        out.values[u] = wx[u].value() / d;
    }
    return out;
}

AggregateColumn compute_ice(const RecordTable& records, const CompiledCondition& top,
                            const CompiledCondition& bottom, const CompiledCondition& universe,
                            const UnitIndex& units, const std::string& variable) {
    std::size_t nu = units.ids.size();
    std::vector<kernels::Accum> t(nu), b(nu), tot(nu);
    for (std::size_t r = 0; r < records.n_records(); ++r) {
        if (!universe.eval(records, r)) continue;
        std::size_t u = units.at(records.unit_ids[r]);
        tot[u].add(records.weights[r]);
        bool in_top = top.eval(records, r);
        bool in_bottom = bottom.eval(records, r);
        if (in_top && in_bottom)
            throw ConfigError("ice variable '" + variable +
                              "': top and bottom conditions overlap (record " +
                              std::to_string(r + 1) + ")");
        if (in_top) t[u].add(records.weights[r]);
        if (in_bottom) b[u].add(records.weights[r]);
    }
    AggregateColumn out;
    out.values.assign(nu, 0.0);
    out.missing.assign(nu, 0);
    out.respondents.assign(nu, 0.0);
    for (std::size_t u = 0; u < nu; ++u) {
        double d = tot[u].value();
        out.respondents[u] = d;
        if (d <= 0.0) {
            out.missing[u] = 1;
            continue;
        }
        out.values[u] = std::clamp((t[u].value() - b[u].value()) / d, -1.0, 1.0);
    }
    return out;
}

double weighted_percentile(std::vector<std::pair<double, double>> value_weight, double pct) {
    if (value_weight.empty()) throw NumericError("weighted percentile of empty data");
    if (!(pct >= 0.0 && pct <= 100.0)) throw ConfigError("percentile must be in [0, 100]");
    for (auto& [v, w] : value_weight)
        if (!(w > 0.0)) throw NumericError("weighted percentile: weights must be > 0");
    std::sort(value_weight.begin(), value_weight.end());

    std::size_t n = value_weight.size();
    std::vector<double> cum(n);
    kernels::Accum acc;
    for (std::size_t i = 0; i < n; ++i) {
        acc.add(value_weight[i].second);
        cum[i] = acc.value();
    }
    double total = cum[n - 1];
    double p = pct / 100.0;
    double h = 1.0 + (total - 1.0) * p;
    h = std::clamp(h, std::min(1.0, total), total);

    std::size_t k = static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), h) - cum.begin());
    if (k >= n) k = n - 1;
    if (k == 0) return value_weight[0].first;
    double prev = cum[k - 1];
    if (h >= prev + 1.0) return value_weight[k].first;
    double t = h - prev;
    return value_weight[k - 1].first + t * (value_weight[k].first - value_weight[k - 1].first);
}

std::pair<double, double> derive_ice_thresholds(const RecordTable& records, std::size_t attr,
                                                double lower_pct, double upper_pct,
                                                Warnings& warnings) {
    std::vector<std::pair<double, double>> vw;
    vw.reserve(records.n_records());
    for (std::size_t r = 0; r < records.n_records(); ++r) {
        if (records.is_missing(attr, r)) continue;
        vw.emplace_back(records.numeric(attr, r), records.weights[r]);
    }
    if (vw.empty())
        throw DataError("threshold attribute '" + records.attr_names[attr] +
                        "' has no non-missing values");
    double lo = weighted_percentile(vw, lower_pct);
    double hi = weighted_percentile(std::move(vw), upper_pct);
    if (lo == hi)
        warnings.add("degenerate distribution for attribute '" + records.attr_names[attr] +
                     "': percentile cuts coincide at " + format_double(lo, 10));
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// Mapping
// ---------------------------------------------------------------------------

MappingConfig load_mapping(const std::string& json_text, const VariableCatalog& catalog,
                           const std::string& context) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(context + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError(context + ": top level must be an object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (it.key() != "thresholds" && it.key() != "variables" && it.key() != "missing_values")
            throw ConfigError(context + ": unknown field '" + it.key() + "'");
    }

    MappingConfig cfg;
    if (doc.contains("missing_values")) {
        for (const auto& m : doc["missing_values"]) cfg.missing_codes.insert(m.get<std::string>());
    }
    if (doc.contains("thresholds")) {
        for (auto it = doc["thresholds"].begin(); it != doc["thresholds"].end(); ++it) {
            const json& jt = it.value();
            for (auto f = jt.begin(); f != jt.end(); ++f)
                if (f.key() != "universe" && f.key() != "attribute" && f.key() != "percentile")
                    throw ConfigError(context + ": threshold '" + it.key() +
                                      "': unknown field '" + f.key() + "'");
            ThresholdSpec ts;
            ts.universe = jt.at("universe").get<std::string>();
            ts.attribute = jt.at("attribute").get<std::string>();
            ts.percentile = jt.at("percentile").get<double>();
            cfg.thresholds[it.key()] = std::move(ts);
        }
    }

    if (!doc.contains("variables") || !doc["variables"].is_object())
        throw ConfigError(context + ": 'variables' object required");
    const json& vars = doc["variables"];
    for (auto it = vars.begin(); it != vars.end(); ++it)
        if (!catalog.find_variable(it.key()))
            throw ConfigError(context + ": recipe for unknown variable '" + it.key() + "'");

    for (const auto& dim : catalog.dimensions) {
        for (const auto& v : dim.variables) {
            if (!vars.contains(v.name))
                throw ConfigError(context + ": no recipe for variable '" + v.name + "'");
            const json& jr = vars[v.name];
            std::string where = context + ": variable '" + v.name + "'";
            VariableRecipe rec;
            rec.variable = v.name;
            rec.kind = v.kind;
            if (!jr.contains("universe") || !jr["universe"].is_string())
                throw ConfigError(where + ": 'universe' required");
            rec.universe = jr["universe"].get<std::string>();
            auto allow_only = [&](std::initializer_list<const char*> keys) {
                for (auto it2 = jr.begin(); it2 != jr.end(); ++it2) {
                    bool ok = it2.key() == "universe";
                    for (const char* k : keys)
                        if (it2.key() == k) ok = true;
                    if (!ok) throw ConfigError(where + ": unknown field '" + it2.key() + "'");
                }
            };
            switch (v.kind) {
                case VariableKind::percentage: {
                    allow_only({"numerator", "denominator"});
                    if (!jr.contains("numerator"))
                        throw ConfigError(where + ": 'numerator' condition required");
                    // the denominator is always explicit: question respondents
                    // vs. full population is a per-variable modeling choice
                    if (!jr.contains("denominator"))
                        throw ConfigError(where + ": 'denominator' condition required "
                                                  "(use {\"const\": true} for the full population)");
                    rec.numerator = parse_condition_json(jr["numerator"], where);
                    rec.denominator = parse_condition_json(jr["denominator"], where);
                    break;
                }
                case VariableKind::weighted_mean: {
                    allow_only({"attribute"});
                    if (!jr.contains("attribute") || !jr["attribute"].is_string())
                        throw ConfigError(where + ": 'attribute' required");
                    rec.attribute = jr["attribute"].get<std::string>();
                    break;
                }
                case VariableKind::ice_ratio: {
                    allow_only({"top", "bottom", "ice_universe"});
                    if (!jr.contains("top") || !jr.contains("bottom") ||
                        !jr.contains("ice_universe"))
                        throw ConfigError(where +
                                          ": 'top', 'bottom', and 'ice_universe' required");
                    rec.top = parse_condition_json(jr["top"], where);
                    rec.bottom = parse_condition_json(jr["bottom"], where);
                    rec.ice_universe = parse_condition_json(jr["ice_universe"], where);
                    break;
                }
            }
            cfg.recipes.push_back(std::move(rec));
        }
    }
    return cfg;
}

MappingConfig load_mapping_file(const std::string& path, const VariableCatalog& catalog) {
    return load_mapping(read_file(path), catalog, path);
}

std::map<std::string, std::pair<double, double>> load_coordinates(const std::string& text,
                                                                  char delimiter,
                                                                  const std::string& context) {
    CsvTable csv = parse_csv(text, delimiter, context);
    std::size_t id_col = csv.column("unit_id");
    std::size_t x_col = csv.column("x");
    std::size_t y_col = csv.column("y");
    std::map<std::string, std::pair<double, double>> coords;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        if (coords.count(row[id_col]))
            throw ParseError(context + ": duplicate coordinates for unit '" + row[id_col] + "'");
        coords[row[id_col]] = {parse_double(row[x_col], context + " x"),
                               parse_double(row[y_col], context + " y")};
    }
    return coords;
}

IngestResult build_area_table(const std::map<std::string, RecordTable>& universes,
                              const VariableCatalog& catalog, const MappingConfig& mapping,
                              const std::map<std::string, std::pair<double, double>>& coordinates,
                              MissingPolicy policy) {
    catalog.validate();
    IngestResult result;

    // units = union over universes, sorted
    std::vector<std::string> all_ids;
    for (const auto& [name, records] : universes)
        all_ids.insert(all_ids.end(), records.unit_ids.begin(), records.unit_ids.end());
    if (all_ids.empty()) throw DataError("no records in any universe");
    UnitIndex units = UnitIndex::from_ids(std::move(all_ids));

    {
        std::vector<std::string> without_coords;
        for (const auto& id : units.ids)
            if (!coordinates.count(id)) without_coords.push_back(id);
        if (!without_coords.empty())
            throw DataError("units without coordinates: " + join(without_coords, ", "));
    }

    auto universe_of = [&](const VariableRecipe& rec) -> const RecordTable& {
        auto it = universes.find(rec.universe);
        if (it == universes.end())
            throw ConfigError("variable '" + rec.variable + "': unknown universe '" +
                              rec.universe + "'");
        return it->second;
    };

    // resolve named thresholds first (global, region-wide)
    for (const auto& [name, spec] : mapping.thresholds) {
        auto it = universes.find(spec.universe);
        if (it == universes.end())
            throw ConfigError("threshold '" + name + "': unknown universe '" + spec.universe +
                              "'");
        const RecordTable& records = it->second;
        std::size_t attr = records.attr_index(spec.attribute);
        std::vector<std::pair<double, double>> vw;
        for (std::size_t r = 0; r < records.n_records(); ++r) {
            if (records.is_missing(attr, r)) continue;
            vw.emplace_back(records.numeric(attr, r), records.weights[r]);
        }
        if (vw.empty())
            throw DataError("threshold '" + name + "': no non-missing values for attribute '" +
                            spec.attribute + "'");
        result.thresholds[name] = weighted_percentile(std::move(vw), spec.percentile);
    }

    // one column per catalog variable, catalog order
    std::vector<AggregateColumn> agg_columns;
    std::vector<std::string> names;
    for (const auto& rec : mapping.recipes) {
        const RecordTable& records = universe_of(rec);
        AggregateColumn col;
        switch (rec.kind) {
            case VariableKind::percentage: {
                auto pred = CompiledCondition::compile(rec.numerator, records, result.thresholds,
                                                       rec.variable);
                auto den = CompiledCondition::compile(rec.denominator, records, result.thresholds,
                                                      rec.variable);
                col = aggregate_percentage(records, pred, den, units);
                break;
            }
            case VariableKind::weighted_mean: {
                col = aggregate_weighted_mean(records, records.attr_index(rec.attribute), units);
                break;
            }
            case VariableKind::ice_ratio: {
                auto top = CompiledCondition::compile(rec.top, records, result.thresholds,
                                                      rec.variable);
                auto bottom = CompiledCondition::compile(rec.bottom, records, result.thresholds,
                                                         rec.variable);
                auto uni = CompiledCondition::compile(rec.ice_universe, records, result.thresholds,
                                                      rec.variable);
                col = compute_ice(records, top, bottom, uni, units, rec.variable);
                break;
            }
        }
        agg_columns.push_back(std::move(col));
        names.push_back(rec.variable);
    }

    // missing-unit policy
    std::vector<char> drop(units.ids.size(), 0);
    for (std::size_t j = 0; j < agg_columns.size(); ++j) {
        auto& col = agg_columns[j];
        bool any_present = std::any_of(col.missing.begin(), col.missing.end(),
                                       [](char m) { return !m; });
        if (!any_present)
            throw DataError("variable '" + names[j] + "' has no unit with data");
        for (std::size_t u = 0; u < units.ids.size(); ++u) {
            if (!col.missing[u]) continue;
            if (policy == MissingPolicy::drop_unit) {
                drop[u] = 1;
                result.audit.push_back({units.ids[u], names[j], "dropped_unit",
                                        "zero denominator weight"});
            } else {
                kernels::Accum acc;
                std::size_t cnt = 0;
                for (std::size_t v = 0; v < units.ids.size(); ++v) {
                    if (col.missing[v]) continue;
                    acc.add(col.values[v]);
                    ++cnt;
                }
                col.values[u] = acc.value() / static_cast<double>(cnt);
                result.audit.push_back({units.ids[u], names[j], "imputed",
                                        "region mean " + format_double(col.values[u], 10)});
            }
        }
    }

    AreaTable& table = result.table;
    table.column_names = names;
    table.columns.resize(names.size());
    table.population.resize(names.size());
    for (std::size_t u = 0; u < units.ids.size(); ++u) {
        if (drop[u]) continue;
        table.unit_ids.push_back(units.ids[u]);
        auto [x, y] = coordinates.at(units.ids[u]);
        table.xs.push_back(x);
        table.ys.push_back(y);
        for (std::size_t j = 0; j < names.size(); ++j) {
            table.columns[j].push_back(agg_columns[j].values[u]);
            table.population[j].push_back(agg_columns[j].respondents[u]);
        }
    }
    if (table.unit_ids.empty())
        throw DataError("missing-unit policy dropped every unit");
    if (policy == MissingPolicy::drop_unit && !result.audit.empty()) {
        std::set<std::string> dropped;
        for (const auto& e : result.audit) dropped.insert(e.unit_id);
        result.warnings.add("dropped " + std::to_string(dropped.size()) +
                            " unit(s) with missing aggregates; see audit log");
    }
    table.validate_shape();
    return result;
}

}  // namespace geoses
