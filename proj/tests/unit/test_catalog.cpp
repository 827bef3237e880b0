#include <doctest.h>

#include <map>
#include <set>

#include "geoses/catalog.hpp"
#include "geoses/error.hpp"

using namespace geoses;

TEST_CASE("bundled catalog has 7 dimensions with the documented counts") {
    VariableCatalog cat = bundled_catalog();
    REQUIRE(cat.dimensions.size() == 7);
    CHECK(cat.variable_count() == 46);

    std::map<std::string, std::size_t> counts;
    for (const auto& d : cat.dimensions) counts[d.name] = d.variables.size();
    CHECK(counts["education"] == 7);
    CHECK(counts["mobility"] == 6);
    CHECK(counts["poverty"] == 5);
    CHECK(counts["wealth"] == 3);
    CHECK(counts["income"] == 1);
    CHECK(counts["segregation"] == 5);
    CHECK(counts["deprivation"] == 19);

    // every variable exactly once
    std::set<std::string> names;
    for (const auto& n : cat.variable_names()) CHECK(names.insert(n).second);
    CHECK(names.count("P_GRAD"));
    CHECK(names.count("ICE_branco_renda"));
    CHECK(names.count("MED_RENDDOM"));

    // ICE variables only in the segregation-style dimension
    for (const auto& d : cat.dimensions)
        for (const auto& v : d.variables)
            if (v.kind == VariableKind::ice_ratio) CHECK(d.segregation_style);
}

TEST_CASE("catalog round-trips through serialization") {
    VariableCatalog cat = bundled_catalog();
    std::string text = save_catalog(cat);
    VariableCatalog again = load_catalog(text);
    CHECK(again == cat);
    CHECK(save_catalog(again) == text);
}

TEST_CASE("repo catalog file matches the embedded copy") {
    // data/catalog/census2010.json is the editable twin of the compiled-in
    // default; they must stay in sync
    VariableCatalog embedded = bundled_catalog();
    VariableCatalog from_file = load_catalog_file(GEOSES_SOURCE_DIR "/data/catalog/census2010.json");
    CHECK(from_file == embedded);
}

TEST_CASE("minimal single-dimension catalog is valid") {
    auto cat = load_catalog(R"({
      "name": "mini", "version": "1",
      "dimensions": [
        {"name": "d", "variables": [{"name": "v", "kind": "percentage"}]}
      ]})");
    CHECK(cat.variable_count() == 1);
    CHECK(cat.dimensions[0].variables[0].polarity_hint == PolarityHint::neutral);
}

TEST_CASE("catalog validation errors") {
    CHECK_THROWS_AS(load_catalog(R"({"dimensions": [
        {"name": "d", "variables": [
            {"name": "P_GRAD", "kind": "percentage"},
            {"name": "P_GRAD", "kind": "percentage"}]}]})"),
                    ConfigError);  // duplicate name
    CHECK_THROWS_AS(load_catalog(R"({"dimensions": [{"name": "d", "variables": []}]})"),
                    ConfigError);  // empty dimension
    CHECK_THROWS_AS(load_catalog(R"({"dimensions": [
        {"name": "d", "variables": [{"name": "v", "kind": "mystery"}]}]})"),
                    ConfigError);  // unknown kind
    CHECK_THROWS_AS(load_catalog(R"({"dimensions": [
        {"name": "d", "variables": [{"name": "v", "kind": "ice_ratio"}]}]})"),
                    ConfigError);  // ice outside a segregation-style dimension
    CHECK_THROWS_AS(load_catalog(R"({"surprise": 1, "dimensions": [
        {"name": "d", "variables": [{"name": "v", "kind": "percentage"}]}]})"),
                    ConfigError);  // unknown field rejected
}
