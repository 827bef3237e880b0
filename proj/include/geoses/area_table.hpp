#pragma once

#include <string>
#include <vector>

namespace geoses {

// Rectangular table of aggregated variable values per geographic unit.
// Columns are in catalog order; all columns have one value per unit.
struct AreaTable {
    std::vector<std::string> unit_ids;
    std::vector<double> xs;  // projected plane, meters or degrees as configured
    std::vector<double> ys;
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> columns;
    // weighted respondent totals per variable, for auditing (same shape as columns)
    std::vector<std::vector<double>> population;

    std::size_t n_units() const { return unit_ids.size(); }
    std::size_t n_columns() const { return column_names.size(); }
    const std::vector<double>& column(const std::string& name) const;  // throws DataError
    std::size_t column_index(const std::string& name) const;           // throws DataError

    // structural checks: column/coordinate/population lengths agree.
    // Value-range invariants (percentages in [0,100], ICE in [-1,1]) are
    // enforced where columns are produced, in the aggregation routines.
    void validate_shape() const;  // throws DataError
};

// Delimited export with unit_id, x, y, then catalog-order columns at 15
// significant digits. `preamble` lines (already '#'-prefixed) go first.
std::string area_table_to_csv(const AreaTable& table, char delimiter = ',',
                              const std::string& preamble = "");

}  // namespace geoses
