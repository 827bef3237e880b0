#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "geoses/error.hpp"
#include "geoses/pipeline.hpp"
#include "geoses/rng.hpp"
#include "geoses/stats.hpp"
#include "geoses/synth.hpp"
#include "oracles.hpp"

using namespace geoses;

namespace {

// tiny catalog: income + a two-variable dimension
VariableCatalog mini_catalog() {
    return load_catalog(R"({"name": "mini", "version": "1", "dimensions": [
      {"name": "income", "variables": [{"name": "INC", "kind": "weighted_mean"}]},
      {"name": "edu", "variables": [
        {"name": "A", "kind": "percentage"},
        {"name": "B", "kind": "percentage"}]}
    ]})");
}

AreaTable table_from(std::vector<std::string> names, std::vector<std::vector<double>> cols) {
    AreaTable t;
    std::size_t n = cols[0].size();
    for (std::size_t i = 0; i < n; ++i) {
        t.unit_ids.push_back("u" + std::to_string(i + 1));
        t.xs.push_back(static_cast<double>(i));
        t.ys.push_back(0.0);
    }
    t.column_names = std::move(names);
    t.columns = std::move(cols);
    return t;
}

}  // namespace

TEST_CASE("preprocess shifts every cell and keeps correlations") {
    auto t = table_from({"INC", "A", "B"},
                        {{0, 1, 2, 3}, {100, 50, 25, 0}, {1, 2, 4, 8}});
    PipelineConfig cfg;
    auto shifted = preprocess(t, cfg);
    CHECK(shifted.columns[0][0] == 10.0);
    CHECK(shifted.columns[1][0] == 110.0);
    auto c0 = correlation(t.columns, t.column_names);
    auto c1 = correlation(shifted.columns, shifted.column_names);
    for (std::size_t i = 0; i < c0.values.size(); ++i)
        CHECK(std::abs(c0.values[i] - c1.values[i]) <= 1e-12);
}

TEST_CASE("stage1: single-variable dimension selects that variable") {
    Rng rng(1);
    std::vector<double> inc(20), a(20), b(20);
    for (std::size_t i = 0; i < 20; ++i) {
        inc[i] = rng.normal();
        a[i] = rng.normal();
        b[i] = rng.normal();
    }
    auto t = table_from({"INC", "A", "B"}, {inc, a, b});
    PipelineConfig cfg;
    std::vector<std::string> dropped;
    std::map<std::string, StageSummary> summaries;
    Warnings w;
    auto sel = stage1_dimension_selection(preprocess(t, cfg), mini_catalog(), cfg, dropped,
                                          summaries, w);
    REQUIRE(sel.size() == 2);
    CHECK(sel[0].first == "income");
    CHECK(sel[0].second == std::vector<std::string>{"INC"});
}

TEST_CASE("stage1: highly correlated pair keeps one component; tie-break by catalog order") {
    // B = A + small independent noise -> r ~ 0.998; eigenvalues ~ (1.998, 0.002)
    Rng rng(7);
    std::vector<double> inc(40), a(40), b(40);
    for (std::size_t i = 0; i < 40; ++i) {
        inc[i] = rng.normal();
        a[i] = rng.normal();
        b[i] = a[i] + 0.05 * rng.normal();
    }
    auto t = table_from({"INC", "A", "B"}, {inc, a, b});
    PipelineConfig cfg;
    std::vector<std::string> dropped;
    std::map<std::string, StageSummary> summaries;
    Warnings w;
    auto sel = stage1_dimension_selection(preprocess(t, cfg), mini_catalog(), cfg, dropped,
                                          summaries, w);
    REQUIRE(summaries.at("edu").components_kept == 1);
    REQUIRE(sel[1].second.size() == 1);
    // loadings are (1,1)/sqrt(2) up to noise; exact tie goes to the first
    // catalog variable, near-tie to the larger magnitude
    CHECK((sel[1].second[0] == "A" || sel[1].second[0] == "B"));

    // exact tie: B perfectly collinear with A
    std::vector<double> b_exact = a;
    auto t2 = table_from({"INC", "A", "B"}, {inc, a, b_exact});
    std::map<std::string, StageSummary> summaries2;
    auto sel2 = stage1_dimension_selection(preprocess(t2, cfg), mini_catalog(), cfg, dropped,
                                           summaries2, w);
    CHECK(sel2[1].second == std::vector<std::string>{"A"});
}

TEST_CASE("stage1: three mutually uncorrelated variables keep all three") {
    // exactly orthogonal patterns -> sample correlation 0
    std::vector<double> z1{1, -1, 1, -1, 1, -1, 1, -1};
    std::vector<double> u{1, 1, -1, -1, 1, 1, -1, -1};
    std::vector<double> v{1, -1, -1, 1, 1, -1, -1, 1};
    std::vector<double> inc{1, 2, 3, 4, 5, 6, 7, 8};
    auto cat = load_catalog(R"({"dimensions": [
      {"name": "income", "variables": [{"name": "INC", "kind": "weighted_mean"}]},
      {"name": "d", "variables": [
        {"name": "A", "kind": "percentage"},
        {"name": "B", "kind": "percentage"},
        {"name": "C", "kind": "percentage"}]}
    ]})");
    auto t = table_from({"INC", "A", "B", "C"}, {inc, z1, u, v});
    PipelineConfig cfg;
    std::vector<std::string> dropped;
    std::map<std::string, StageSummary> summaries;
    Warnings w;
    auto sel = stage1_dimension_selection(preprocess(t, cfg), cat, cfg, dropped, summaries, w);
    CHECK(summaries.at("d").components_kept == 3);
    CHECK(sel[1].second == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("stage1: fully constant dimension is an error naming it") {
    auto t = table_from({"INC", "A", "B"},
                        {{1, 2, 3, 4}, {5, 5, 5, 5}, {7, 7, 7, 7}});
    PipelineConfig cfg;
    std::vector<std::string> dropped;
    std::map<std::string, StageSummary> summaries;
    Warnings w;
    CHECK_THROWS_WITH_AS(
        stage1_dimension_selection(preprocess(t, cfg), mini_catalog(), cfg, dropped, summaries, w),
        doctest::Contains("edu"), DataError);
}

TEST_CASE("stage2 rule: strictly above the mean magnitude") {
    Warnings w;
    auto kept = stage2_filter({"x", "y", "z"}, {0.8, -0.5, 0.2}, w);
    CHECK(kept == std::vector<std::string>{"x"});
    CHECK(w.empty());
}

TEST_CASE("stage2 rule: all-equal magnitudes fall back to keep-all with warning") {
    Warnings w;
    auto kept = stage2_filter({"x", "y"}, {0.7071, -0.7071}, w);
    CHECK(kept == std::vector<std::string>{"x", "y"});
    CHECK(w.size() == 1);
}

TEST_CASE("stage3: orientation makes index correlate positively with income") {
    Rng rng(55);
    std::size_t n = 60;
    std::vector<double> inc(n), a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        double g = rng.normal();
        inc[i] = 5 * g + rng.normal();
        a[i] = -3 * g + rng.normal();  // anti-correlated block dominates
        b[i] = -2 * g + rng.normal();
    }
    auto t = table_from({"INC", "A", "B"}, {inc, a, b});
    PipelineConfig cfg;
    auto shifted = preprocess(t, cfg);
    auto out = stage3_final_index(shifted, {"INC", "A", "B"}, "INC");
    CHECK(stats::pearson(out.raw_scores, shifted.column("INC")) >= 0.0);

    // the sign gauge: negating every loading pre-orientation cannot change
    // the oriented result (exercised by construction: orientation flipped)
    auto res = run_index_pipeline(t, mini_catalog(), cfg);
    CHECK(stats::pearson(res.scores, t.column("INC")) >= 0.0);
}

TEST_CASE("stage3: single final variable gives the standardized variable") {
    Rng rng(9);
    std::vector<double> inc(30), a(30), b(30);
    for (auto* col : {&inc, &a, &b})
        for (auto& v : *col) v = rng.normal();
    auto t = table_from({"INC", "A", "B"}, {inc, a, b});
    PipelineConfig cfg;
    auto shifted = preprocess(t, cfg);
    auto out = stage3_final_index(shifted, {"INC"}, "INC");
    auto z = stats::zscores(shifted.column("INC"));
    for (std::size_t i = 0; i < z.size(); ++i)
        CHECK(out.raw_scores[i] == doctest::Approx(z[i]).epsilon(1e-12));
}

TEST_CASE("standardize_scores: affine map with exact endpoints") {
    auto s = standardize_scores({0, 5, 10});
    CHECK(s == std::vector<double>{-1, 0, 1});
    CHECK_THROWS_AS(standardize_scores({3, 3, 3}), NumericError);

    Rng rng(12);
    std::vector<double> raw(100);
    for (auto& v : raw) v = rng.normal(3.0, 17.0);
    auto scaled = standardize_scores(raw);
    CHECK(*std::min_element(scaled.begin(), scaled.end()) == -1.0);
    CHECK(*std::max_element(scaled.begin(), scaled.end()) == 1.0);
    // worst unit at -1, best at +1
    auto worst = std::min_element(raw.begin(), raw.end()) - raw.begin();
    auto best = std::max_element(raw.begin(), raw.end()) - raw.begin();
    CHECK(scaled[worst] == -1.0);
    CHECK(scaled[best] == 1.0);
}

TEST_CASE("cronbach alpha oracle values") {
    // columns engineered for exact pairwise correlations
    std::vector<double> z1{1, -1, 1, -1, 1, -1, 1, -1};
    std::vector<double> u{1, 1, -1, -1, 1, 1, -1, -1};
    std::vector<double> v{1, -1, -1, 1, 1, -1, -1, 1};
    std::vector<double> mix(8);
    for (int i = 0; i < 8; ++i) mix[i] = 0.8 * z1[i] + 0.6 * u[i];

    SUBCASE("k=2, r=0.8") {
        double a = cronbach_alpha({z1, mix}, {1, 1});
        CHECK(a == doctest::Approx(1.6 / 1.8).epsilon(1e-13));
        CHECK(a == doctest::Approx(oracles::naive_cronbach({z1, mix}, {1, 1})).epsilon(1e-13));
    }
    SUBCASE("perfect homogeneity") {
        CHECK(cronbach_alpha({z1, z1, z1}, {1, 1, 1}) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("zero mean correlation") {
        CHECK(cronbach_alpha({z1, u, v}, {1, 1, 1}) == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("sign alignment flips negative loadings") {
        std::vector<double> neg(8);
        for (int i = 0; i < 8; ++i) neg[i] = -mix[i];
        CHECK(cronbach_alpha({z1, neg}, {1, -1}) == doctest::Approx(1.6 / 1.8).epsilon(1e-13));
    }
    SUBCASE("fewer than two variables is an error") {
        CHECK_THROWS_AS(cronbach_alpha({z1}, {1}), NumericError);
    }
}

TEST_CASE("full pipeline on the synthetic table") {
    VariableCatalog catalog = bundled_catalog();
    AreaTable t = synth_area_table(120, catalog, 4242);
    PipelineConfig cfg;
    IndexResult res = run_index_pipeline(t, catalog, cfg);

    CHECK(res.unit_ids.size() == 120);
    CHECK(*std::min_element(res.scores.begin(), res.scores.end()) == -1.0);
    CHECK(*std::max_element(res.scores.begin(), res.scores.end()) == 1.0);
    CHECK(stats::pearson(res.scores, t.column("MED_RENDDOM")) >= 0.0);

    // every stage-2 variable came from stage 1
    std::set<std::string> s1;
    for (const auto& [dim, vars] : res.stage1_selected) s1.insert(vars.begin(), vars.end());
    for (const auto& v : res.stage2_selected) CHECK(s1.count(v) == 1);

    // mobility carries no signal in the generator and must be inactive
    CHECK(std::find(res.inactive_dimensions.begin(), res.inactive_dimensions.end(), "mobility") !=
          res.inactive_dimensions.end());

    // representatives cover exactly the active dimensions
    std::set<std::string> active;
    for (const auto& d : res.dimensions) {
        active.insert(d.dimension);
        CHECK(d.sub_scores.size() == res.unit_ids.size());
        CHECK(*std::min_element(d.sub_scores.begin(), d.sub_scores.end()) == -1.0);
        CHECK(*std::max_element(d.sub_scores.begin(), d.sub_scores.end()) == 1.0);
    }
    for (const auto& inactive : res.inactive_dimensions) CHECK(!active.count(inactive));
    CHECK(active.size() + res.inactive_dimensions.size() == catalog.dimensions.size());

    // poverty (unfavorable variables) anti-correlates with the index when active
    for (const auto& d : res.dimensions)
        if (d.dimension == "poverty") CHECK(d.correlation < 0.0);

    REQUIRE(res.cronbach_alpha.has_value());
    // cross-check against the brute-force oracle on the final columns
    std::vector<std::vector<double>> cols;
    std::vector<double> signs;
    for (const auto& [name, loading] : res.final_loadings) {
        auto c = t.column(name);
        for (auto& x : c) x += cfg.shift_constant;
        cols.push_back(std::move(c));
        signs.push_back(loading);
    }
    CHECK(*res.cronbach_alpha ==
          doctest::Approx(oracles::naive_cronbach(cols, signs)).epsilon(1e-9));
}

TEST_CASE("gauge invariance: column negation upstream does not break orientation") {
    // negating the raw first component is equivalent to flipping every
    // loading; orientation must produce identical final scores
    VariableCatalog catalog = mini_catalog();
    Rng rng(31337);
    std::size_t n = 50;
    std::vector<double> inc(n), a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        double g = rng.normal();
        inc[i] = 2 * g + 0.3 * rng.normal();
        a[i] = g + 0.4 * rng.normal();
        b[i] = -g + 0.4 * rng.normal();
    }
    auto t = table_from({"INC", "A", "B"}, {inc, a, b});
    PipelineConfig cfg;
    auto res = run_index_pipeline(t, catalog, cfg);
    CHECK(stats::pearson(res.scores, t.column("INC")) >= 0.0);
}

TEST_CASE("compare_with_reference: self and negated self") {
    VariableCatalog catalog = bundled_catalog();
    AreaTable t = synth_area_table(50, catalog, 99);
    PipelineConfig cfg;
    IndexResult res = run_index_pipeline(t, catalog, cfg);

    std::vector<double> self = res.scores;
    std::vector<double> neg(self.size());
    for (std::size_t i = 0; i < self.size(); ++i) neg[i] = -self[i];
    auto cm = compare_with_reference(res, t, res.unit_ids, {"self", "negself"}, {self, neg});
    std::size_t self_idx = cm.size() - 2, neg_idx = cm.size() - 1;
    CHECK(cm.at(0, self_idx) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cm.at(0, neg_idx) == doctest::Approx(-1.0).epsilon(1e-12));

    // misaligned ids
    auto bad_ids = res.unit_ids;
    bad_ids[0] = "nope";
    CHECK_THROWS_AS(compare_with_reference(res, t, bad_ids, {"self"}, {self}), DataError);
}

TEST_CASE("compare_with_reference: recovers designed correlations") {
    VariableCatalog catalog = bundled_catalog();
    AreaTable t = synth_area_table(400, catalog, 2718);
    PipelineConfig cfg;
    IndexResult res = run_index_pipeline(t, catalog, cfg);

    // a reference built as a noisy copy of the index should correlate strongly
    Rng rng(5);
    std::vector<double> ref(res.scores.size());
    for (std::size_t i = 0; i < ref.size(); ++i) ref[i] = res.scores[i] + 0.2 * rng.normal();
    auto cm = compare_with_reference(res, t, res.unit_ids, {"ref"}, {ref});
    double r = cm.at(0, cm.size() - 1);
    double expected = oracles::naive_pearson(res.scores, ref);
    CHECK(r == doctest::Approx(expected).epsilon(1e-10));
    CHECK(r > 0.8);
}

TEST_CASE("pipeline warnings: constant variable dropped, stage2 skip") {
    auto cat = mini_catalog();
    std::vector<double> inc{1, 2, 3, 4, 5, 6};
    std::vector<double> a{9, 9, 9, 9, 9, 9};  // constant: dropped
    std::vector<double> b{2, 4, 8, 16, 32, 64};
    auto t = table_from({"INC", "A", "B"}, {inc, a, b});
    PipelineConfig cfg;
    auto res = run_index_pipeline(t, cat, cfg);
    CHECK(res.dropped_constant_variables == std::vector<std::string>{"A"});
    CHECK(res.stage2_selected.size() >= 1);
}
