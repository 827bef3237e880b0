#include "geoses/area_table.hpp"

#include <algorithm>

#include "geoses/csv.hpp"
#include "geoses/error.hpp"
#include "geoses/util.hpp"

namespace geoses {

const std::vector<double>& AreaTable::column(const std::string& name) const {
    return columns[column_index(name)];
}

std::size_t AreaTable::column_index(const std::string& name) const {
    auto it = std::find(column_names.begin(), column_names.end(), name);
    if (it == column_names.end()) throw DataError("area table: no column '" + name + "'");
    return static_cast<std::size_t>(it - column_names.begin());
}

void AreaTable::validate_shape() const {
    std::size_t n = n_units();
    if (xs.size() != n || ys.size() != n) throw DataError("area table: coordinate length mismatch");
    if (columns.size() != column_names.size())
        throw DataError("area table: column count mismatch");
    for (std::size_t j = 0; j < columns.size(); ++j)
        if (columns[j].size() != n)
            throw DataError("area table: column '" + column_names[j] + "' has wrong length");
    if (!population.empty()) {
        if (population.size() != columns.size())
            throw DataError("area table: population shape mismatch");
        for (const auto& p : population)
            if (p.size() != n) throw DataError("area table: population length mismatch");
    }
}

std::string area_table_to_csv(const AreaTable& table, char delimiter, const std::string& preamble) {
    CsvTable out;
    out.header = {"unit_id", "x", "y"};
    for (const auto& c : table.column_names) out.header.push_back(c);
    for (std::size_t i = 0; i < table.n_units(); ++i) {
        std::vector<std::string> row;
        row.reserve(out.header.size());
        row.push_back(table.unit_ids[i]);
        row.push_back(format_double(table.xs[i], 15));
        row.push_back(format_double(table.ys[i], 15));
        for (const auto& col : table.columns) row.push_back(format_double(col[i], 15));
        out.rows.push_back(std::move(row));
    }
    return to_csv(out, delimiter, preamble);
}

}  // namespace geoses
