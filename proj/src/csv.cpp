#include "geoses/csv.hpp"

#include <algorithm>

#include "geoses/error.hpp"
#include "geoses/util.hpp"

namespace geoses {

namespace {

// quote-aware scan of the whole document; quoted fields may contain the
// delimiter, doubled quotes, and newlines
std::vector<std::vector<std::string>> scan_rows(const std::string& text, char delim,
                                                const std::string& context) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool field_started = false;
    bool row_started = false;
    bool row_is_comment = false;  // unquoted '#' as the first character of a line
    std::size_t line_no = 1;

    auto end_field = [&] {
        fields.push_back(std::move(cur));
        cur.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        bool blank = fields.size() == 1 && fields[0].empty();
        if (!row_is_comment && !blank) rows.push_back(std::move(fields));
        fields.clear();
        row_started = false;
        row_is_comment = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line_no;
                cur += c;
            }
            continue;
        }
        if (!row_started && c == '#') row_is_comment = true;
        row_started = true;
        if (row_is_comment) {
            if (c == '\n') {
                ++line_no;
                row_started = false;
                row_is_comment = false;
            }
            continue;
        }
        if (c == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (c == delim) {
            end_field();
        } else if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            end_row();
            ++line_no;
        } else {
            cur += c;
            field_started = true;
        }
    }
    if (quoted) throw ParseError(context + ":" + std::to_string(line_no) + ": unterminated quote");
    if (row_is_comment) return rows;
    if (!cur.empty() || !fields.empty() || field_started) {
        if (!cur.empty() && cur.back() == '\r') cur.pop_back();
        end_row();
    }
    return rows;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(const std::string& name) const {
    return std::find(header.begin(), header.end(), name) != header.end();
}

CsvTable parse_csv(const std::string& text, char delimiter, const std::string& context) {
    auto rows = scan_rows(text, delimiter, context);
    if (rows.empty()) throw ParseError(context + ": missing header row");
    CsvTable t;
    t.header = std::move(rows.front());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != t.header.size())
            throw ParseError(context + ": row " + std::to_string(r) + ": expected " +
                             std::to_string(t.header.size()) + " fields, got " +
                             std::to_string(rows[r].size()));
        t.rows.push_back(std::move(rows[r]));
    }
    return t;
}

CsvTable read_csv(const std::string& path, char delimiter) {
    return parse_csv(read_file(path), delimiter, path);
}

namespace {

std::string escape_field(const std::string& f, char delim) {
    bool needs = f.find(delim) != std::string::npos || f.find('"') != std::string::npos ||
                 f.find('\n') != std::string::npos;
    if (!needs) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string to_csv(const CsvTable& table, char delimiter, const std::string& preamble) {
    std::string out = preamble;
    std::string sep(1, delimiter);
    auto emit = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += sep;
            out += escape_field(fields[i], delimiter);
        }
        out += '\n';
    };
    emit(table.header);
    for (const auto& row : table.rows) emit(row);
    return out;
}

}  // namespace geoses
