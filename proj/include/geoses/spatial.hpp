#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geoses/error.hpp"

namespace geoses {

// Flattened polygon geometry per unit: every ring (outer, hole, or part of a
// multi-polygon) is a closed sequence of (x, y) vertices.
struct UnitGeometry {
    std::string unit_id;
    std::vector<std::vector<std::pair<double, double>>> rings;
};

struct PolygonSet {
    std::vector<UnitGeometry> units;
};

// GeoJSON FeatureCollection with Polygon/MultiPolygon features; unit ids come
// from the named feature property.
PolygonSet load_geojson(const std::string& text, const std::string& unit_id_property,
                        const std::string& context);

// Binary contiguity weights. Neighbor lists are sorted, symmetric, and
// self-free; isolated units stay in the list with empty neighborhoods.
struct SpatialWeights {
    std::vector<std::string> unit_ids;
    std::vector<std::vector<std::uint32_t>> neighbors;
    bool row_standardized = false;

    std::size_t n_units() const { return unit_ids.size(); }
    std::vector<std::size_t> isolated_units() const;
    std::size_t total_links() const;  // sum of list sizes (= 2E)
    void validate() const;            // symmetry, no self-neighbors
};

// Units are neighbors iff they share at least one vertex after snapping
// coordinates to the quantum grid (queen semantics on a noded coverage).
SpatialWeights queen_contiguity(const PolygonSet& polygons, Warnings& warnings,
                                double quantum = 1e-6);

// Plain adjacency list: one "unit_id: n1 n2 ..." line per unit. The relation
// must be symmetric.
SpatialWeights adjacency_from_text(const std::string& text, const std::string& context);

// ---------------------------------------------------------------------------
// Moran's I with permutation inference
// ---------------------------------------------------------------------------

enum class MoranSidedness { one_sided, two_sided };

struct MoranParams {
    int permutations = 999;
    std::uint64_t seed = 0;
    MoranSidedness side = MoranSidedness::one_sided;
};

struct MoranResult {
    double moran_i = 0.0;
    double pseudo_p = 0.0;  // (R+1)/(M+1); NaN when permutations == 0
    int permutations = 0;
    std::size_t n_used = 0;  // non-isolated units entering the statistic
};

// I = (n/S0) * sum_ij w_ij z_i z_j / sum_i z_i^2 on deviations from the mean.
// Isolated units are excluded with a warning. The pseudo p-value is one-sided
// toward the sign of the observed I by default; replicates use per-index
// derived seeds, so the result is independent of evaluation order.
MoranResult morans_i(std::span<const double> values, const SpatialWeights& weights,
                     const MoranParams& params, Warnings& warnings);

// ---------------------------------------------------------------------------
// Regression fits
// ---------------------------------------------------------------------------

struct SpatialFit {
    enum class Model { ols, gwr };
    Model model = Model::ols;
    std::size_t n = 0;

    double intercept = 0.0;  // OLS globals
    double slope = 0.0;
    std::vector<double> local_intercepts;  // GWR, per unit
    std::vector<double> local_slopes;

    std::vector<double> fitted;
    std::vector<double> residuals;
    std::vector<double> std_residuals;  // residuals / sample sd

    double hat_trace = 0.0;  // effective parameters tr(S); 2 for OLS
    double rss = 0.0;
    double tss = 0.0;
    double r2 = 0.0;
    double r2_adjusted = 0.0;  // effective dof n - tr(S)
    double aicc = 0.0;

    std::optional<double> moran_i;  // on standardized residuals, when weights given
    std::optional<double> moran_p;

    std::uint64_t outcome_digest = 0;  // guards compare_models against mixed outcomes
};

// Gaussian AICc shared by both models:
//   2n ln(sigma) + n ln(2 pi) + n (n + tr(S)) / (n - 2 - tr(S)),  sigma^2 = RSS/n
double aicc_gaussian(std::size_t n, double rss, double hat_trace);

SpatialFit ols_simple(std::span<const double> y, std::span<const double> x,
                      const SpatialWeights* weights = nullptr, const MoranParams& moran = {},
                      Warnings* warnings = nullptr);

struct GwrConfig {
    enum class Kernel { adaptive_bisquare, uniform };
    int neighbor_count = 0;  // k nearest neighbors define the local bandwidth
    Kernel kernel = Kernel::adaptive_bisquare;
    // duplicate coordinates get a deterministic jitter of 1e-9 x bbox diagonal
    std::uint64_t jitter_seed = 0x6a09e667f3bcc908ull;
};

// Local weighted least squares with an adaptive bi-square kernel: bandwidth
// h_i is the distance to the k-th nearest neighbor, weights (1-(d/h)^2)^2
// for d < h. Kernel::uniform gives every unit full weight (diagnostic mode;
// coefficients then equal OLS everywhere).
SpatialFit gwr_fit(std::span<const double> y, std::span<const double> x,
                   std::span<const double> xs, std::span<const double> ys, const GwrConfig& config,
                   const SpatialWeights* weights, const MoranParams& moran, Warnings& warnings);

// ---------------------------------------------------------------------------
// Model comparison report (the Tables 2-3 layout)
// ---------------------------------------------------------------------------

struct ModelReportRow {
    std::string indicator;
    std::string model;  // "ols" | "gwr"
    double r2_adjusted = 0.0;
    double aicc = 0.0;
    std::optional<double> moran_i;
    std::optional<double> moran_p;
    bool best_fit = false;             // lowest AICc in the block
    bool spatial_dependence = false;   // moran_p < 0.05
    bool computed = true;              // false: degenerate fit, numeric cells rendered as --
};

// Rows sorted ascending by AICc; all fits must share the same outcome vector.
std::vector<ModelReportRow> compare_models(
    const std::vector<std::pair<std::string, const SpatialFit*>>& fits);

}  // namespace geoses
