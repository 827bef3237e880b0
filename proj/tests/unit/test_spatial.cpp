#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "geoses/error.hpp"
#include "geoses/rng.hpp"
#include "geoses/spatial.hpp"
#include "geoses/stats.hpp"
#include "oracles.hpp"

using namespace geoses;

namespace {

// grid of unit squares, row-major ids "c<r>_<c>"
PolygonSet grid_polygons(int rows, int cols) {
    PolygonSet set;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            UnitGeometry u;
            u.unit_id = "c" + std::to_string(r) + "_" + std::to_string(c);
            double x0 = c, x1 = c + 1, y0 = r, y1 = r + 1;
            u.rings = {{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}}};
            set.units.push_back(std::move(u));
        }
    return set;
}

SpatialWeights path_graph(std::size_t n) {
    SpatialWeights w;
    for (std::size_t i = 0; i < n; ++i) w.unit_ids.push_back("p" + std::to_string(i));
    w.neighbors.resize(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        w.neighbors[i].push_back(static_cast<std::uint32_t>(i + 1));
        w.neighbors[i + 1].push_back(static_cast<std::uint32_t>(i));
    }
    for (auto& nb : w.neighbors) std::sort(nb.begin(), nb.end());
    return w;
}

}  // namespace

TEST_CASE("queen contiguity on grids") {
    Warnings w;
    SUBCASE("2x2: every cell touches the other three") {
        auto sw = queen_contiguity(grid_polygons(2, 2), w);
        for (const auto& nb : sw.neighbors) CHECK(nb.size() == 3);
    }
    SUBCASE("1x3 strip") {
        auto sw = queen_contiguity(grid_polygons(1, 3), w);
        CHECK(sw.neighbors[0].size() == 1);
        CHECK(sw.neighbors[1].size() == 2);
        CHECK(sw.neighbors[2].size() == 1);
    }
    SUBCASE("3x3: degree sequence and symmetry") {
        auto sw = queen_contiguity(grid_polygons(3, 3), w);
        std::vector<std::size_t> degrees;
        for (const auto& nb : sw.neighbors) degrees.push_back(nb.size());
        CHECK(degrees == std::vector<std::size_t>{3, 5, 3, 5, 8, 5, 3, 5, 3});
        sw.validate();
        CHECK(sw.total_links() % 2 == 0);
    }
    SUBCASE("quantization absorbs sub-quantum noise") {
        auto set = grid_polygons(1, 2);
        set.units[1].rings[0][0].first += 4e-7;  // below the 1e-6 default quantum
        auto sw = queen_contiguity(set, w);
        CHECK(sw.neighbors[0].size() == 1);
    }
    SUBCASE("isolated unit warns") {
        auto set = grid_polygons(1, 2);
        UnitGeometry far;
        far.unit_id = "far";
        far.rings = {{{100, 100}, {101, 100}, {101, 101}, {100, 101}, {100, 100}}};
        set.units.push_back(std::move(far));
        Warnings local;
        auto sw = queen_contiguity(set, local);
        CHECK(sw.isolated_units().size() == 1);
        CHECK(!local.empty());
    }
}

TEST_CASE("geojson loading and queen weights") {
    std::string text = R"({
      "type": "FeatureCollection",
      "features": [
        {"type": "Feature", "properties": {"unit_id": "a"},
         "geometry": {"type": "Polygon",
                      "coordinates": [[[0,0],[1,0],[1,1],[0,1],[0,0]]]}},
        {"type": "Feature", "properties": {"unit_id": "b"},
         "geometry": {"type": "MultiPolygon",
                      "coordinates": [[[[1,0],[2,0],[2,1],[1,1],[1,0]]]]}}
      ]})";
    auto set = load_geojson(text, "unit_id", "test");
    REQUIRE(set.units.size() == 2);
    Warnings w;
    auto sw = queen_contiguity(set, w);
    CHECK(sw.neighbors[0] == std::vector<std::uint32_t>{1});

    CHECK_THROWS_AS(load_geojson(R"({"type": "FeatureCollection", "features": [
        {"type": "Feature", "properties": {"unit_id": "x"}, "geometry": null}]})",
                                 "unit_id", "test"),
                    DataError);
}

TEST_CASE("adjacency file parsing enforces symmetry") {
    auto sw = adjacency_from_text("a: b\nb: a c\nc: b\n", "adj");
    CHECK(sw.unit_ids == std::vector<std::string>{"a", "b", "c"});
    CHECK(sw.neighbors[1].size() == 2);
    CHECK_THROWS_AS(adjacency_from_text("a: b\nb:\n", "adj"), DataError);   // asymmetric
    CHECK_THROWS_AS(adjacency_from_text("a: a\n", "adj"), DataError);      // self
    CHECK_THROWS_AS(adjacency_from_text("a: z\n", "adj"), DataError);      // unknown
}

TEST_CASE("moran: path graph with alternating values gives exactly -1") {
    auto w = path_graph(4);
    MoranParams mp;
    mp.permutations = 0;
    Warnings warn;
    auto res = morans_i(std::vector<double>{1, -1, 1, -1}, w, mp, warn);
    CHECK(res.moran_i == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::isnan(res.pseudo_p));
}

TEST_CASE("moran matches the naive full-matrix formula") {
    Rng rng(64);
    auto w = path_graph(12);
    std::vector<std::vector<int>> wmat(12, std::vector<int>(12, 0));
    for (std::size_t i = 0; i < 12; ++i)
        for (auto j : w.neighbors[i]) wmat[i][j] = 1;
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> v(12);
        for (auto& x : v) x = rng.normal();
        MoranParams mp;
        mp.permutations = 0;
        Warnings warn;
        auto res = morans_i(v, w, mp, warn);
        CHECK(res.moran_i == doctest::Approx(oracles::naive_moran(v, wmat)).epsilon(1e-12));
    }
}

TEST_CASE("moran: affine invariance") {
    Rng rng(123);
    auto w = path_graph(20);
    std::vector<double> v(20);
    for (auto& x : v) x = rng.normal();
    MoranParams mp;
    mp.permutations = 0;
    Warnings warn;
    double base = morans_i(v, w, mp, warn).moran_i;
    for (auto [a, b] : {std::pair{3.5, 0.0}, std::pair{-2.0, 7.0}, std::pair{0.001, -4.0}}) {
        std::vector<double> t(20);
        for (std::size_t i = 0; i < 20; ++i) t[i] = a * v[i] + b;
        CHECK(std::abs(morans_i(t, w, mp, warn).moran_i - base) <= 1e-12);
    }
}

TEST_CASE("moran errors: constant field, too few units") {
    auto w = path_graph(6);
    MoranParams mp;
    Warnings warn;
    CHECK_THROWS_AS(morans_i(std::vector<double>(6, 3.0), w, mp, warn), NumericError);
    auto w3 = path_graph(3);
    CHECK_THROWS_AS(morans_i(std::vector<double>{1, 2, 3}, w3, mp, warn), DataError);
}

TEST_CASE("moran permutation inference: trend on a path is significant") {
    std::size_t n = 30;
    auto w = path_graph(n);
    std::vector<double> v(n);
    std::iota(v.begin(), v.end(), 0.0);
    MoranParams mp;
    mp.permutations = 999;
    mp.seed = 20250101;
    Warnings warn;
    auto res = morans_i(v, w, mp, warn);
    CHECK(res.moran_i > 0.0);
    CHECK(res.pseudo_p <= 0.05);
    CHECK(res.pseudo_p >= 1.0 / 1000.0);

    // deterministic per seed
    auto res2 = morans_i(v, w, mp, warn);
    CHECK(res2.pseudo_p == res.pseudo_p);
    mp.seed = 777;
    auto res3 = morans_i(v, w, mp, warn);
    CHECK(res3.moran_i == res.moran_i);  // statistic ignores the seed
}

TEST_CASE("moran permutation calibration: null values rarely look significant") {
    std::size_t n = 25;
    auto w = path_graph(n);
    MoranParams mp;
    mp.permutations = 999;
    Warnings warn;
    int benign = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(9000 + trial);
        std::vector<double> v(n);
        for (auto& x : v) x = rng.normal();
        mp.seed = 31000 + trial;
        auto res = morans_i(v, w, mp, warn);
        CHECK(res.pseudo_p >= 1.0 / 1000.0);
        CHECK(res.pseudo_p <= 1.0);
        if (res.pseudo_p > 0.01) ++benign;
    }
    CHECK(benign >= 95);
}

TEST_CASE("ols: exact fit and affine equivariance") {
    std::vector<double> x{1, 2, 3, 4, 5, 6};
    std::vector<double> y(6);
    for (std::size_t i = 0; i < 6; ++i) y[i] = 2 * x[i] + 1;
    auto fit = ols_simple(y, x);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-13));
    for (double e : fit.residuals) CHECK(std::abs(e) < 1e-12);
    CHECK(fit.r2 == doctest::Approx(1.0));
    CHECK(fit.hat_trace == 2.0);
    CHECK(std::isinf(fit.aicc));  // zero residual variance

    // scaling y scales slope and residuals, R^2 unchanged
    std::vector<double> noisy(6), scaled(6);
    Rng rng(4);
    for (std::size_t i = 0; i < 6; ++i) {
        noisy[i] = y[i] + rng.normal();
        scaled[i] = 10.0 * noisy[i];
    }
    auto f1 = ols_simple(noisy, x);
    auto f2 = ols_simple(scaled, x);
    CHECK(f2.slope == doctest::Approx(10.0 * f1.slope).epsilon(1e-12));
    CHECK(f2.r2 == doctest::Approx(f1.r2).epsilon(1e-12));
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(f2.residuals[i] == doctest::Approx(10.0 * f1.residuals[i]).epsilon(1e-10));
}

TEST_CASE("ols: slope of independent noise stays near zero") {
    Rng rng(2025);
    std::size_t n = 400;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.normal();
        y[i] = rng.normal();
    }
    auto fit = ols_simple(y, x);
    double se = std::sqrt((fit.rss / (n - 2)) / stats::centered_sumsq(x));
    CHECK(std::abs(fit.slope) < 4 * se);

    CHECK_THROWS_AS(ols_simple(y, std::vector<double>(n, 1.0)), NumericError);
}

TEST_CASE("ols: standardized residuals have unit sample sd; moran attaches") {
    Rng rng(808);
    std::size_t n = 30;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = static_cast<double>(i);
        y[i] = 0.5 * x[i] + rng.normal();
    }
    auto w = path_graph(n);
    MoranParams mp;
    mp.permutations = 199;
    mp.seed = 5;
    Warnings warn;
    auto fit = ols_simple(y, x, &w, mp, &warn);
    CHECK(stats::sample_sd(fit.std_residuals) == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(fit.moran_i.has_value());
    REQUIRE(fit.moran_p.has_value());
    // scale invariance: I on standardized residuals equals I on raw residuals
    mp.permutations = 0;
    auto raw = morans_i(fit.residuals, w, mp, warn);
    CHECK(*fit.moran_i == doctest::Approx(raw.moran_i).epsilon(1e-12));
}

namespace {

struct GwrFixture {
    std::vector<double> y, x, xs, ys;
};

GwrFixture two_regime(std::size_t per_cluster, double gap, std::uint64_t seed) {
    GwrFixture f;
    Rng rng(seed);
    for (std::size_t i = 0; i < 2 * per_cluster; ++i) {
        bool right = i >= per_cluster;
        double slope = right ? 3.0 : 1.0;
        double x = rng.uniform(0.0, 10.0);
        f.x.push_back(x);
        f.y.push_back(slope * x + 0.5 + 0.01 * rng.normal());
        f.xs.push_back(rng.uniform(0.0, 10.0) + (right ? gap : 0.0));
        f.ys.push_back(rng.uniform(0.0, 10.0));
    }
    return f;
}

}  // namespace

TEST_CASE("gwr: uniform diagnostic kernel reproduces OLS everywhere") {
    Rng rng(99);
    std::size_t n = 40;
    std::vector<double> x(n), y(n), xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.normal();
        y[i] = 1.5 * x[i] + rng.normal();
        xs[i] = rng.uniform(0, 100);
        ys[i] = rng.uniform(0, 100);
    }
    auto ols = ols_simple(y, x);
    GwrConfig gc;
    gc.kernel = GwrConfig::Kernel::uniform;
    MoranParams mp;
    Warnings warn;
    auto gwr = gwr_fit(y, x, xs, ys, gc, nullptr, mp, warn);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(gwr.local_slopes[i] - ols.slope) <= 1e-9);
        CHECK(std::abs(gwr.local_intercepts[i] - ols.intercept) <= 1e-9);
    }
    CHECK(gwr.hat_trace == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(gwr.aicc - ols.aicc) <= 1e-9);
}

TEST_CASE("gwr: exact linear data is reproduced locally for any k") {
    Rng rng(17);
    std::size_t n = 50;
    std::vector<double> x(n), y(n), xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.uniform(-5, 5);
        y[i] = 2.0 * x[i] + 1.0;
        xs[i] = rng.uniform(0, 10);
        ys[i] = rng.uniform(0, 10);
    }
    for (int k : {3, 10, 49}) {
        GwrConfig gc;
        gc.neighbor_count = k;
        MoranParams mp;
        Warnings warn;
        auto fit = gwr_fit(y, x, xs, ys, gc, nullptr, mp, warn);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(fit.local_slopes[i] - 2.0) <= 1e-9);
            CHECK(std::abs(fit.residuals[i]) <= 1e-9);
        }
    }
}

TEST_CASE("gwr: two-regime data recovers per-cluster slopes") {
    auto f = two_regime(60, 1000.0, 11);
    GwrConfig gc;
    gc.neighbor_count = 20;
    MoranParams mp;
    Warnings warn;
    auto fit = gwr_fit(f.y, f.x, f.xs, f.ys, gc, nullptr, mp, warn);
    for (std::size_t i = 0; i < f.y.size(); ++i) {
        double expected = i < 60 ? 1.0 : 3.0;
        CHECK(std::abs(fit.local_slopes[i] - expected) <= 0.05);
    }
    // hat trace within [p, n]
    CHECK(fit.hat_trace >= 2.0 - 1e-9);
    CHECK(fit.hat_trace <= static_cast<double>(f.y.size()));

    auto ols = ols_simple(f.y, f.x);
    CHECK(fit.aicc < ols.aicc);
}

TEST_CASE("gwr: duplicate coordinates are jittered deterministically") {
    Rng rng(3);
    std::size_t n = 12;
    std::vector<double> x(n), y(n), xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.normal();
        y[i] = x[i] + 0.1 * rng.normal();
        xs[i] = static_cast<double>(i / 3);  // blocks of identical coordinates
        ys[i] = 0.0;
    }
    GwrConfig gc;
    gc.neighbor_count = 4;
    MoranParams mp;
    Warnings warn;
    auto f1 = gwr_fit(y, x, xs, ys, gc, nullptr, mp, warn);
    auto f2 = gwr_fit(y, x, xs, ys, gc, nullptr, mp, warn);
    CHECK(f1.fitted == f2.fitted);  // same jitter seed, same result
    CHECK(!warn.empty());
}

TEST_CASE("gwr: local constant predictor is an error naming the unit") {
    std::vector<double> x{1, 1, 1, 1, 5, 6, 7, 8};
    std::vector<double> y{1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<double> xs{0, 0.1, 0.2, 0.3, 100, 100.1, 100.2, 100.3};
    std::vector<double> ys(8, 0.0);
    GwrConfig gc;
    gc.neighbor_count = 3;
    MoranParams mp;
    Warnings warn;
    CHECK_THROWS_AS(gwr_fit(y, x, xs, ys, gc, nullptr, mp, warn), NumericError);
}

TEST_CASE("gwr parameter validation") {
    std::vector<double> v{1, 2, 3, 4, 5};
    GwrConfig gc;
    gc.neighbor_count = 2;  // below p + 2
    MoranParams mp;
    Warnings warn;
    CHECK_THROWS_AS(gwr_fit(v, v, v, v, gc, nullptr, mp, warn), ConfigError);
    gc.neighbor_count = 5;  // k >= n
    CHECK_THROWS_AS(gwr_fit(v, v, v, v, gc, nullptr, mp, warn), ConfigError);
}

TEST_CASE("compare_models: ranking, flags, mixed outcomes") {
    Rng rng(21);
    std::size_t n = 40;
    std::vector<double> x1(n), x2(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x1[i] = rng.normal();
        x2[i] = rng.normal();
        y[i] = 2 * x1[i] + 0.3 * rng.normal();
    }
    auto good = ols_simple(y, x1);
    auto bad = ols_simple(y, x2);
    auto rows = compare_models({{"good", &good}, {"bad", &bad}});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].indicator == "good");
    CHECK(rows[0].best_fit);
    CHECK(!rows[1].best_fit);
    CHECK(rows[0].aicc < rows[1].aicc);

    auto other = ols_simple(x2, x1);  // different outcome
    CHECK_THROWS_AS(compare_models({{"good", &good}, {"other", &other}}), DataError);

    auto single = compare_models({{"only", &good}});
    CHECK(single[0].best_fit);
}

TEST_CASE("moran: row-standardized weights") {
    // on a path, row standardization averages neighbor values
    auto w = path_graph(5);
    w.row_standardized = true;
    std::vector<double> v{2, 4, 6, 8, 10};
    MoranParams mp;
    mp.permutations = 0;
    Warnings warn;
    // hand evaluation: z = (-4,-2,0,2,4); lag_i = mean of neighbor z
    // lags: (-2, -2, 0, 2, 2); sum(z*lag) = 8+4+0+4+8 = 24; sum(z^2) = 40
    // I = (n/S0) * 24/40 with S0 = n = 5
    auto res = morans_i(v, w, mp, warn);
    CHECK(res.moran_i == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("moran: isolated units are excluded with a warning") {
    auto w = path_graph(6);
    w.unit_ids.push_back("island");
    w.neighbors.emplace_back();  // isolated
    std::vector<double> v{1, 2, 3, 4, 5, 6, 100};
    MoranParams mp;
    mp.permutations = 0;
    Warnings warn;
    auto res = morans_i(v, w, mp, warn);
    CHECK(res.n_used == 6);
    CHECK(!warn.empty());
    // equals the statistic on the connected part alone
    auto w6 = path_graph(6);
    auto res6 = morans_i(std::vector<double>{1, 2, 3, 4, 5, 6}, w6, mp, warn);
    CHECK(res.moran_i == doctest::Approx(res6.moran_i).epsilon(1e-14));
}

TEST_CASE("gwr: standardized residuals have unit sample sd") {
    auto f = two_regime(40, 500.0, 77);
    GwrConfig gc;
    gc.neighbor_count = 12;
    MoranParams mp;
    Warnings warn;
    auto fit = gwr_fit(f.y, f.x, f.xs, f.ys, gc, nullptr, mp, warn);
    CHECK(stats::sample_sd(fit.std_residuals) == doctest::Approx(1.0).epsilon(1e-12));
}
