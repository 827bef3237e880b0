#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace geoses {

// Delimited text with a mandatory header row. Fields may be quoted with
// double quotes (embedded quotes doubled); writers quote only when needed.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;              // throws ParseError
    bool has_column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path, char delimiter = ',');
CsvTable parse_csv(const std::string& text, char delimiter, const std::string& context);
std::string to_csv(const CsvTable& table, char delimiter = ',',
                   const std::string& preamble = "");

}  // namespace geoses
