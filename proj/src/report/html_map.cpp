#include <map>
#include <set>

#include <json.hpp>

#include "geoses/report.hpp"
#include "geoses/util.hpp"

namespace geoses {

using nlohmann::json;

namespace {

const char* const kMapTemplate =
#include "embedded_map_template.inc"
    ;

std::string replace_all(std::string text, const std::string& needle, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), value);
        pos += value.size();
    }
    return text;
}

}  // namespace

std::string render_map_html(const CsvTable& scores, const PolygonSet& polygons,
                            const std::string& palette, const std::string& title,
                            std::vector<std::string>& missing_geometry,
                            std::vector<std::string>& layers_out) {
    if (palette != "red_blue" && palette != "brown_teal")
        throw ConfigError("palette must be red_blue or brown_teal (got '" + palette + "')");

    std::size_t id_col = scores.column("unit_id");
    layers_out.clear();
    for (const auto& h : scores.header) {
        if (h == "unit_id") continue;
        if (h.size() > 4 && h.substr(h.size() - 4) == "_raw") continue;
        layers_out.push_back(h);
    }
    if (layers_out.empty() || layers_out.front() != "geoses")
        throw DataError("scores file: expected a 'geoses' column");

    std::map<std::string, const UnitGeometry*> geom;
    for (const auto& u : polygons.units) geom[u.unit_id] = &u;

    json payload;
    payload["title"] = title;
    payload["palette"] = palette;
    payload["layers"] = layers_out;
    payload["units"] = json::array();
    missing_geometry.clear();

    for (const auto& row : scores.rows) {
        const std::string& id = row[id_col];
        json unit;
        unit["id"] = id;
        json values = json::object();
        for (std::size_t j = 0; j < scores.header.size(); ++j) {
            if (j == id_col) continue;
            values[scores.header[j]] = row[j];  // exact export strings
        }
        unit["values"] = std::move(values);
        json rings = json::array();
        auto it = geom.find(id);
        if (it == geom.end()) {
            missing_geometry.push_back(id);
        } else {
            for (const auto& ring : it->second->rings) {
                json jr = json::array();
                for (const auto& [x, y] : ring) jr.push_back(json::array({x, y}));
                rings.push_back(std::move(jr));
            }
        }
        unit["rings"] = std::move(rings);
        payload["units"].push_back(std::move(unit));
    }
    payload["missing_geometry"] = missing_geometry;

    std::string html = kMapTemplate;
    html = replace_all(html, "__GEOSES_TITLE__", title);
    // "</" must not appear inside the inline <script> block
    html = replace_all(html, "__GEOSES_PAYLOAD__", replace_all(payload.dump(1), "</", "<\\/"));
    return html;
}

}  // namespace geoses
