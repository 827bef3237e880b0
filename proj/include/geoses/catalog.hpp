#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace geoses {

enum class VariableKind { percentage, weighted_mean, ice_ratio };
enum class PolarityHint { favorable, unfavorable, neutral };

std::string to_string(VariableKind k);
std::string to_string(PolarityHint p);

struct VariableDef {
    std::string name;
    VariableKind kind = VariableKind::percentage;
    std::string description;
    // label for reports only; the pipeline derives orientation from the data
    PolarityHint polarity_hint = PolarityHint::neutral;

    bool operator==(const VariableDef&) const = default;
};

struct Dimension {
    std::string name;
    bool segregation_style = false;  // required for ice_ratio variables
    std::vector<VariableDef> variables;

    bool operator==(const Dimension&) const = default;
};

// The dimension -> variable schema driving aggregation and the PCA stages.
// Ordering is significant: dimension and variable order is the tie-break
// order everywhere downstream.
struct VariableCatalog {
    std::string name;
    std::string version;
    std::vector<Dimension> dimensions;

    bool operator==(const VariableCatalog&) const = default;

    std::size_t variable_count() const;
    std::vector<std::string> variable_names() const;  // catalog order
    const VariableDef* find_variable(const std::string& name) const;
    const Dimension* dimension_of(const std::string& variable) const;
    void validate() const;  // throws ConfigError
};

// JSON catalog document; unknown fields are rejected.
VariableCatalog load_catalog(const std::string& json_text, const std::string& context = "catalog");
VariableCatalog load_catalog_file(const std::string& path);
std::string save_catalog(const VariableCatalog& catalog);

// Catalog for the 2010 Brazilian census sample questionnaire: 7 dimensions,
// 46 variables. Compiled into the library; an identical editable copy ships
// in data/catalog/census2010.json.
const std::string& bundled_catalog_text();
VariableCatalog bundled_catalog();

// Hash of the canonical serialization, for provenance headers.
std::string catalog_hash_hex(const VariableCatalog& catalog);

}  // namespace geoses
