#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geoses/area_table.hpp"
#include "geoses/catalog.hpp"
#include "geoses/error.hpp"

namespace geoses {

// One universe of microdata records (persons or households), column-oriented.
// Cells are kept as text; numeric comparisons parse on demand. A cell is
// missing when empty or listed in missing_codes.
struct RecordTable {
    std::vector<std::string> attr_names;
    std::vector<std::string> unit_ids;  // per record, non-empty
    std::vector<double> weights;        // per record, > 0
    std::vector<std::vector<std::string>> attr_values;  // [attr][record]
    std::set<std::string> missing_codes;

    std::size_t n_records() const { return unit_ids.size(); }
    std::size_t attr_index(const std::string& name) const;  // throws ConfigError
    bool is_missing(std::size_t attr, std::size_t record) const;
    double numeric(std::size_t attr, std::size_t record) const;  // throws ParseError
};

// Delimited text, header row required, with unit_id and weight columns; the
// remaining columns become attributes.
RecordTable load_records(const std::string& text, char delimiter,
                         const std::set<std::string>& missing_codes,
                         const std::string& context);
RecordTable load_records_file(const std::string& path, char delimiter,
                              const std::set<std::string>& missing_codes);

// ---------------------------------------------------------------------------
// Attribute conditions
// ---------------------------------------------------------------------------

// Parsed predicate over record attributes. JSON forms:
//   {"const": true}
//   {"attr": "x", "present": true}            attribute answered
//   {"attr": "x", "eq": "4"}                  string equality
//   {"attr": "x", "in": ["2", "3"]}
//   {"attr": "x", "gt": 5400}                 numeric; also ge / lt / le
//   {"attr": "x", "ge": {"threshold": "income_p80"}}
//   {"all": [...]}, {"any": [...]}, {"not": {...}}
// Numeric comparisons on a missing cell are false.
struct ConditionSpec {
    enum class Op { always, present, eq, in_set, gt, ge, lt, le, all_of, any_of, negate };
    Op op = Op::always;
    bool const_value = true;
    std::string attr;
    std::string str_value;
    std::vector<std::string> set_values;
    double num_value = 0.0;
    std::string threshold_ref;  // non-empty: num_value resolved at compile time
    std::vector<ConditionSpec> children;
};

ConditionSpec parse_condition(const std::string& json_text, const std::string& context);

// Condition bound to a record table (attribute indices and threshold values
// resolved).
class CompiledCondition {
public:
    CompiledCondition() = default;
    bool eval(const RecordTable& records, std::size_t record) const;

    static CompiledCondition compile(const ConditionSpec& spec, const RecordTable& records,
                                     const std::map<std::string, double>& thresholds,
                                     const std::string& context);

private:
    struct Node {
        ConditionSpec::Op op = ConditionSpec::Op::always;
        bool const_value = true;
        std::size_t attr = 0;
        std::string str_value;
        std::set<std::string> set_values;
        double num_value = 0.0;
        std::vector<std::size_t> children;
    };
    std::vector<Node> nodes_;  // nodes_[0] is the root
    bool eval_node(std::size_t idx, const RecordTable& records, std::size_t record) const;
};

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

// Geographic units under aggregation, sorted lexicographically.
struct UnitIndex {
    std::vector<std::string> ids;
    std::unordered_map<std::string, std::size_t> position;

    static UnitIndex from_ids(std::vector<std::string> ids);
    std::size_t at(const std::string& id) const;  // throws DataError
};

struct AggregateColumn {
    std::vector<double> values;
    std::vector<char> missing;
    std::vector<double> respondents;  // weighted denominator / universe totals
};

// 100 * sum(w | pred and denom) / sum(w | denom) per unit; a unit with zero
// denominator weight is flagged missing.
AggregateColumn aggregate_percentage(const RecordTable& records, const CompiledCondition& pred,
                                     const CompiledCondition& denom, const UnitIndex& units);

// sum(w*x)/sum(w) over records with a non-missing attribute value.
AggregateColumn aggregate_weighted_mean(const RecordTable& records, std::size_t attr,
                                        const UnitIndex& units);

// (sum(w | top) - sum(w | bottom)) / sum(w | universe), all within the
// universe condition, so the value is guaranteed in [-1, +1]. A record
// matching both top and bottom is a configuration error.
AggregateColumn compute_ice(const RecordTable& records, const CompiledCondition& top,
                            const CompiledCondition& bottom, const CompiledCondition& universe,
                            const UnitIndex& units, const std::string& variable);

// Weighted percentile over the whole study region. Definition: with values
// sorted and cumulative weights C_k, position h = 1 + (W-1)*p; the value is
// read from the block [C_{k-1}+1, C_k] owning h, with linear interpolation
// across the unit-width gap between consecutive blocks. For integer weights
// this equals the "linear" unweighted quantile of the duplicated sample.
double weighted_percentile(std::vector<std::pair<double, double>> value_weight, double pct);

// 20th/80th style global cut points for ICE income conditions. Emits a
// warning when the distribution is degenerate (both cuts equal).
std::pair<double, double> derive_ice_thresholds(const RecordTable& records, std::size_t attr,
                                                double lower_pct, double upper_pct,
                                                Warnings& warnings);

// ---------------------------------------------------------------------------
// Mapping file and table assembly
// ---------------------------------------------------------------------------

struct VariableRecipe {
    std::string variable;
    std::string universe;  // key into the universes map (persons / households)
    VariableKind kind = VariableKind::percentage;
    ConditionSpec numerator;    // percentage
    ConditionSpec denominator;  // percentage
    std::string attribute;      // weighted_mean
    ConditionSpec top, bottom, ice_universe;  // ice_ratio
};

struct ThresholdSpec {
    std::string universe;
    std::string attribute;
    double percentile = 0.0;
};

struct MappingConfig {
    std::map<std::string, ThresholdSpec> thresholds;
    std::vector<VariableRecipe> recipes;  // catalog order
    std::set<std::string> missing_codes;
};

// Validates that every catalog variable has exactly one recipe of the right
// shape for its kind; unknown fields or variables are rejected.
MappingConfig load_mapping(const std::string& json_text, const VariableCatalog& catalog,
                           const std::string& context = "mapping");
MappingConfig load_mapping_file(const std::string& path, const VariableCatalog& catalog);

enum class MissingPolicy { drop_unit, impute_region_mean };

struct AuditEntry {
    std::string unit_id;
    std::string variable;
    std::string action;  // dropped_unit | imputed
    std::string detail;
};

struct IngestResult {
    AreaTable table;
    std::vector<AuditEntry> audit;
    std::map<std::string, double> thresholds;  // resolved named thresholds
    Warnings warnings;
};

// Full aggregation: thresholds, one column per catalog variable, coordinate
// join, and the missing-unit policy. `coordinates` maps unit_id -> (x, y);
// every unit present in the records must have coordinates.
IngestResult build_area_table(const std::map<std::string, RecordTable>& universes,
                              const VariableCatalog& catalog, const MappingConfig& mapping,
                              const std::map<std::string, std::pair<double, double>>& coordinates,
                              MissingPolicy policy);

std::map<std::string, std::pair<double, double>> load_coordinates(const std::string& text,
                                                                  char delimiter,
                                                                  const std::string& context);

}  // namespace geoses
