#include "geoses/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "geoses/kernels.hpp"
#include "geoses/rng.hpp"
#include "geoses/stats.hpp"
#include "geoses/util.hpp"

namespace geoses {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

namespace {

void collect_ring(const json& jring, std::vector<std::pair<double, double>>& ring,
                  const std::string& context) {
    if (!jring.is_array()) throw ParseError(context + ": ring must be an array");
    for (const auto& pt : jring) {
        if (!pt.is_array() || pt.size() < 2)
            throw ParseError(context + ": ring positions must be [x, y] arrays");
        ring.emplace_back(pt[0].get<double>(), pt[1].get<double>());
    }
}

}  // namespace

PolygonSet load_geojson(const std::string& text, const std::string& unit_id_property,
                        const std::string& context) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(context + ": " + e.what());
    }
    if (doc.value("type", "") != "FeatureCollection")
        throw ParseError(context + ": expected a GeoJSON FeatureCollection");

    std::map<std::string, std::size_t> index;
    PolygonSet set;
    for (const auto& feature : doc.at("features")) {
        if (!feature.contains("properties") || !feature["properties"].contains(unit_id_property))
            throw ParseError(context + ": feature without '" + unit_id_property + "' property");
        const json& idv = feature["properties"][unit_id_property];
        std::string id = idv.is_string() ? idv.get<std::string>() : idv.dump();

        const json& geom = feature.at("geometry");
        if (geom.is_null()) throw DataError(context + ": empty geometry for unit '" + id + "'");
        std::string gtype = geom.value("type", "");

        std::vector<std::vector<std::pair<double, double>>> rings;
        if (gtype == "Polygon") {
            for (const auto& jring : geom.at("coordinates")) {
                rings.emplace_back();
                collect_ring(jring, rings.back(), context);
            }
        } else if (gtype == "MultiPolygon") {
            for (const auto& poly : geom.at("coordinates"))
                for (const auto& jring : poly) {
                    rings.emplace_back();
                    collect_ring(jring, rings.back(), context);
                }
        } else {
            throw ParseError(context + ": unsupported geometry type '" + gtype + "' for unit '" +
                             id + "'");
        }
        if (rings.empty() || rings[0].empty())
            throw DataError(context + ": empty geometry for unit '" + id + "'");

        auto it = index.find(id);
        if (it != index.end()) {
            // repeated feature id: merge parts
            auto& dst = set.units[it->second].rings;
            dst.insert(dst.end(), rings.begin(), rings.end());
        } else {
            index[id] = set.units.size();
            set.units.push_back({id, std::move(rings)});
        }
    }
    if (set.units.empty()) throw DataError(context + ": no features");
    return set;
}

// ---------------------------------------------------------------------------
// Weights
// ---------------------------------------------------------------------------

std::vector<std::size_t> SpatialWeights::isolated_units() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < neighbors.size(); ++i)
        if (neighbors[i].empty()) out.push_back(i);
    return out;
}

std::size_t SpatialWeights::total_links() const {
    std::size_t n = 0;
    for (const auto& nb : neighbors) n += nb.size();
    return n;
}

void SpatialWeights::validate() const {
    if (neighbors.size() != unit_ids.size())
        throw DataError("spatial weights: neighbor list size mismatch");
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        for (auto j : neighbors[i]) {
            if (j >= unit_ids.size()) throw DataError("spatial weights: neighbor out of range");
            if (j == i)
                throw DataError("spatial weights: self-neighbor at unit '" + unit_ids[i] + "'");
            const auto& back = neighbors[j];
            if (!std::binary_search(back.begin(), back.end(), static_cast<std::uint32_t>(i)))
                throw DataError("spatial weights: asymmetric pair ('" + unit_ids[i] + "', '" +
                                unit_ids[j] + "')");
        }
    }
}

SpatialWeights queen_contiguity(const PolygonSet& polygons, Warnings& warnings, double quantum) {
    if (!(quantum > 0.0)) throw ConfigError("queen contiguity: quantum must be > 0");
    SpatialWeights w;
    for (const auto& u : polygons.units) w.unit_ids.push_back(u.unit_id);
    w.neighbors.assign(polygons.units.size(), {});

    // snap vertices to the quantum grid; units sharing a snapped vertex touch
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> vertex_units;
    auto key_of = [quantum](double x, double y) {
        auto qx = static_cast<std::int64_t>(std::llround(x / quantum));
        auto qy = static_cast<std::int64_t>(std::llround(y / quantum));
        std::uint64_t h = 0xcbf29ce484222325ull;
        auto mix = [&h](std::uint64_t v) {
            for (int b = 0; b < 8; ++b) {
                h ^= (v >> (8 * b)) & 0xff;
                h *= 0x100000001b3ull;
            }
        };
        mix(static_cast<std::uint64_t>(qx));
        mix(static_cast<std::uint64_t>(qy));
        return h;
    };

    for (std::size_t i = 0; i < polygons.units.size(); ++i) {
        const auto& unit = polygons.units[i];
        if (unit.rings.empty()) throw DataError("empty geometry for unit '" + unit.unit_id + "'");
        std::set<std::uint64_t> seen;  // one entry per unit per vertex
        for (const auto& ring : unit.rings)
            for (const auto& [x, y] : ring) {
                std::uint64_t k = key_of(x, y);
                if (seen.insert(k).second)
                    vertex_units[k].push_back(static_cast<std::uint32_t>(i));
            }
    }

    std::vector<std::set<std::uint32_t>> nb(polygons.units.size());
    for (const auto& [key, units] : vertex_units) {
        if (units.size() < 2) continue;
        for (std::size_t a = 0; a < units.size(); ++a)
            for (std::size_t b = a + 1; b < units.size(); ++b) {
                nb[units[a]].insert(units[b]);
                nb[units[b]].insert(units[a]);
            }
    }
    for (std::size_t i = 0; i < nb.size(); ++i)
        w.neighbors[i].assign(nb[i].begin(), nb[i].end());

    auto isolated = w.isolated_units();
    if (!isolated.empty()) {
        std::vector<std::string> ids;
        for (auto i : isolated) ids.push_back(w.unit_ids[i]);
        warnings.add("isolated units (no queen neighbors): " + join(ids, ", "));
    }
    w.validate();
    return w;
}

SpatialWeights adjacency_from_text(const std::string& text, const std::string& context) {
    SpatialWeights w;
    std::map<std::string, std::size_t> index;
    std::vector<std::vector<std::string>> raw_neighbors;

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError(context + ":" + std::to_string(line_no) +
                             ": expected 'unit_id: neighbors'");
        std::string id = line.substr(0, colon);
        while (!id.empty() && (id.back() == ' ' || id.back() == '\t')) id.pop_back();
        if (id.empty())
            throw ParseError(context + ":" + std::to_string(line_no) + ": empty unit id");
        if (index.count(id))
            throw ParseError(context + ":" + std::to_string(line_no) + ": duplicate unit '" + id +
                             "'");
        index[id] = w.unit_ids.size();
        w.unit_ids.push_back(id);
        raw_neighbors.emplace_back();
        std::istringstream rest(line.substr(colon + 1));
        std::string nb;
        while (rest >> nb) raw_neighbors.back().push_back(nb);
    }
    if (w.unit_ids.empty()) throw ParseError(context + ": no adjacency entries");

    w.neighbors.assign(w.unit_ids.size(), {});
    for (std::size_t i = 0; i < raw_neighbors.size(); ++i) {
        std::set<std::uint32_t> nbset;
        for (const auto& name : raw_neighbors[i]) {
            auto it = index.find(name);
            if (it == index.end())
                throw DataError(context + ": unit '" + w.unit_ids[i] +
                                "' references unknown neighbor '" + name + "'");
            if (it->second == i)
                throw DataError(context + ": unit '" + w.unit_ids[i] + "' lists itself");
            nbset.insert(static_cast<std::uint32_t>(it->second));
        }
        w.neighbors[i].assign(nbset.begin(), nbset.end());
    }
    w.validate();  // throws on asymmetric files
    return w;
}

// ---------------------------------------------------------------------------
// Moran's I
// ---------------------------------------------------------------------------

namespace {

// cross-product sum_i z_i * lag_i for the subgraph; adjacency is prebuilt on
// the compacted index
double moran_numerator(const std::vector<double>& z,
                       const std::vector<std::vector<std::uint32_t>>& adj,
                       const std::vector<double>& inv_degree) {
    kernels::Accum acc;
    for (std::size_t i = 0; i < z.size(); ++i) {
        double lag = 0.0;
        for (auto j : adj[i]) lag += z[j];
        if (!inv_degree.empty()) lag *= inv_degree[i];
        acc.add(z[i] * lag);
    }
    return acc.value();
}

}  // namespace

MoranResult morans_i(std::span<const double> values, const SpatialWeights& weights,
                     const MoranParams& params, Warnings& warnings) {
    if (values.size() != weights.n_units())
        throw DataError("moran: values/weights length mismatch");

    // compact to non-isolated units
    std::vector<std::size_t> keep;
    std::vector<std::uint32_t> remap(weights.n_units(), 0);
    for (std::size_t i = 0; i < weights.n_units(); ++i) {
        if (!weights.neighbors[i].empty()) {
            remap[i] = static_cast<std::uint32_t>(keep.size());
            keep.push_back(i);
        }
    }
    if (keep.size() < values.size()) {
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < weights.n_units(); ++i)
            if (weights.neighbors[i].empty()) ids.push_back(weights.unit_ids[i]);
        warnings.add("moran: excluded isolated units: " + join(ids, ", "));
    }
    std::size_t n = keep.size();
    if (n < 4) throw DataError("moran: needs at least 4 non-isolated units");

    std::vector<std::vector<std::uint32_t>> adj(n);
    std::size_t links = 0;
    for (std::size_t c = 0; c < n; ++c) {
        for (auto j : weights.neighbors[keep[c]]) {
            adj[c].push_back(remap[j]);
            ++links;
        }
    }
    std::vector<double> inv_degree;
    double s0;
    if (weights.row_standardized) {
        inv_degree.resize(n);
        for (std::size_t i = 0; i < n; ++i) inv_degree[i] = 1.0 / static_cast<double>(adj[i].size());
        s0 = static_cast<double>(n);
    } else {
        s0 = static_cast<double>(links);
    }

    std::vector<double> sub(n);
    for (std::size_t c = 0; c < n; ++c) sub[c] = values[keep[c]];
    double mu = stats::mean(sub);
    std::vector<double> z(n);
    for (std::size_t c = 0; c < n; ++c) z[c] = sub[c] - mu;
    double denom = kernels::dot(z, z);
    if (denom <= 0.0) throw NumericError("moran: values have zero variance");

    double scale = static_cast<double>(n) / s0;
    MoranResult res;
    res.n_used = n;
    res.moran_i = scale * moran_numerator(z, adj, inv_degree) / denom;
    res.permutations = params.permutations;

    if (params.permutations <= 0) {
        res.pseudo_p = std::numeric_limits<double>::quiet_NaN();
        return res;
    }

    int extreme = 0;
    std::vector<double> zp = z;
    for (int rep = 0; rep < params.permutations; ++rep) {
        Rng rng = Rng::derive(params.seed, static_cast<std::uint64_t>(rep));
        for (std::size_t i = n - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
            std::swap(zp[i], zp[j]);
        }
        double ip = scale * moran_numerator(zp, adj, inv_degree) / denom;
        bool hit;
        if (params.side == MoranSidedness::two_sided)
            hit = std::abs(ip) >= std::abs(res.moran_i);
        else if (res.moran_i >= 0.0)
            hit = ip >= res.moran_i;
        else
            hit = ip <= res.moran_i;
        if (hit) ++extreme;
    }
    res.pseudo_p = static_cast<double>(extreme + 1) / static_cast<double>(params.permutations + 1);
    return res;
}

// ---------------------------------------------------------------------------
// Fits
// ---------------------------------------------------------------------------

double aicc_gaussian(std::size_t n, double rss, double hat_trace) {
    double nn = static_cast<double>(n);
    double edf = nn - 2.0 - hat_trace;
    if (edf <= 0.0)
        throw NumericError("aicc undefined: effective dof n - 2 - tr(S) <= 0 (model too flexible)");
    double sigma2 = rss / nn;
    double log_sigma = sigma2 > 0.0 ? 0.5 * std::log(sigma2)
                                    : -std::numeric_limits<double>::infinity();
    return 2.0 * nn * log_sigma + nn * std::log(2.0 * 3.14159265358979323846) +
           nn * (nn + hat_trace) / edf;
}

namespace {

std::uint64_t digest_values(std::span<const double> y) {
    return fnv1a64(std::string_view(reinterpret_cast<const char*>(y.data()),
                                    y.size() * sizeof(double)));
}

void finish_fit(SpatialFit& fit, std::span<const double> y, const SpatialWeights* weights,
                const MoranParams& moran, Warnings* warnings) {
    std::size_t n = y.size();
    fit.n = n;
    fit.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) fit.residuals[i] = y[i] - fit.fitted[i];
    fit.rss = kernels::dot(fit.residuals, fit.residuals);
    fit.tss = stats::centered_sumsq(y);
    if (fit.tss <= 0.0) throw NumericError("regression: outcome has zero variance");

    fit.r2 = 1.0 - fit.rss / fit.tss;
    double edf = static_cast<double>(n) - fit.hat_trace;
    if (edf <= 0.0) throw NumericError("regression: effective dof n - tr(S) <= 0");
    fit.r2_adjusted = 1.0 - (fit.rss / edf) / (fit.tss / (static_cast<double>(n) - 1.0));
    fit.aicc = aicc_gaussian(n, fit.rss, fit.hat_trace);
    fit.outcome_digest = digest_values(y);

    fit.std_residuals.assign(n, 0.0);
    double resid_sumsq = stats::centered_sumsq(fit.residuals);
    if (resid_sumsq > 0.0) {
        // plain scaling by the sample sd; Moran's I is invariant to the
        // choice among common residual standardizations
        double sd = std::sqrt(resid_sumsq / (static_cast<double>(n) - 1.0));
        for (std::size_t i = 0; i < n; ++i) fit.std_residuals[i] = fit.residuals[i] / sd;
        if (weights) {
            Warnings local;
            MoranResult mr = morans_i(fit.std_residuals, *weights, moran,
                                      warnings ? *warnings : local);
            fit.moran_i = mr.moran_i;
            fit.moran_p = mr.pseudo_p;
        }
    } else if (weights && warnings) {
        warnings->add("regression: residuals are identically zero; Moran's I skipped");
    }
}

}  // namespace

SpatialFit ols_simple(std::span<const double> y, std::span<const double> x,
                      const SpatialWeights* weights, const MoranParams& moran,
                      Warnings* warnings) {
    if (y.size() != x.size()) throw DataError("ols: y/x length mismatch");
    std::size_t n = y.size();
    if (n < 3) throw DataError("ols: needs at least 3 observations");
    if (stats::is_constant(x)) throw NumericError("ols: predictor is constant");

    double mx = stats::mean(x);
    double my = stats::mean(y);
    std::vector<double> cx(n), cy(n);
    for (std::size_t i = 0; i < n; ++i) {
        cx[i] = x[i] - mx;
        cy[i] = y[i] - my;
    }
    double sxx = kernels::dot(cx, cx);
    double sxy = kernels::dot(cx, cy);

    SpatialFit fit;
    fit.model = SpatialFit::Model::ols;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.fitted.resize(n);
    for (std::size_t i = 0; i < n; ++i) fit.fitted[i] = fit.intercept + fit.slope * x[i];
    fit.hat_trace = 2.0;
    finish_fit(fit, y, weights, moran, warnings);
    return fit;
}

SpatialFit gwr_fit(std::span<const double> y, std::span<const double> x,
                   std::span<const double> xs, std::span<const double> ys, const GwrConfig& config,
                   const SpatialWeights* weights, const MoranParams& moran, Warnings& warnings) {
    std::size_t n = y.size();
    if (x.size() != n || xs.size() != n || ys.size() != n)
        throw DataError("gwr: input length mismatch");
    if (n < 4) throw DataError("gwr: needs at least 4 observations");
    if (stats::is_constant(x)) throw NumericError("gwr: predictor is constant");

    bool adaptive = config.kernel == GwrConfig::Kernel::adaptive_bisquare;
    std::size_t k = static_cast<std::size_t>(config.neighbor_count);
    if (adaptive) {
        if (config.neighbor_count < 3)
            throw ConfigError("gwr: neighbor_count must be >= 3 (p + 2 for a simple regression)");
        if (k >= n) throw ConfigError("gwr: neighbor_count must be < number of units");
    }

    // deterministic jitter for exact coordinate ties
    std::vector<double> px(xs.begin(), xs.end());
    std::vector<double> py(ys.begin(), ys.end());
    if (adaptive) {
        auto [xmin, xmax] = stats::min_max(px);
        auto [ymin, ymax] = stats::min_max(py);
        double diag = std::hypot(xmax - xmin, ymax - ymin);
        if (diag <= 0.0) throw DataError("gwr: all coordinates coincide");
        std::map<std::pair<double, double>, int> seen;
        Rng rng(config.jitter_seed);
        std::size_t jittered = 0;
        for (std::size_t i = 0; i < n; ++i) {
            auto key = std::make_pair(px[i], py[i]);
            int count = seen[key]++;
            if (count > 0) {
                px[i] += rng.uniform(-1.0, 1.0) * 1e-9 * diag;
                py[i] += rng.uniform(-1.0, 1.0) * 1e-9 * diag;
                ++jittered;
            }
        }
        if (jittered > 0)
            warnings.add("gwr: jittered " + std::to_string(jittered) +
                         " duplicate coordinate(s) by 1e-9 of the bounding-box diagonal");
    }

    SpatialFit fit;
    fit.model = SpatialFit::Model::gwr;
    fit.local_intercepts.resize(n);
    fit.local_slopes.resize(n);
    fit.fitted.resize(n);

    std::vector<double> d2(n), wloc(n), u(n);
    std::vector<double> knn(n);
    kernels::Accum trace;
    for (std::size_t i = 0; i < n; ++i) {
        if (adaptive) {
            kernels::squared_distances(px, py, px[i], py[i], d2);
            // k-th nearest distinct point, self excluded
            std::size_t m = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) knn[m++] = d2[j];
            std::nth_element(knn.begin(), knn.begin() + static_cast<std::ptrdiff_t>(k - 1),
                             knn.begin() + static_cast<std::ptrdiff_t>(m));
            double h2 = knn[k - 1];
            if (h2 <= 0.0)
                throw NumericError("gwr: zero bandwidth at unit index " + std::to_string(i));
            for (std::size_t j = 0; j < n; ++j) {
                double t = d2[j] / h2;
                wloc[j] = t < 1.0 ? (1.0 - t) * (1.0 - t) : 0.0;
            }
        } else {
            std::fill(wloc.begin(), wloc.end(), 1.0);
        }

        for (std::size_t j = 0; j < n; ++j) u[j] = x[j] - x[i];
        auto mom = kernels::wls_moments(wloc, u, y);
        double sxx_c = mom.swxx - mom.swx * mom.swx / mom.sw;
        if (!(sxx_c > 1e-12 * (mom.swxx / mom.sw) + 1e-300))
            throw NumericError("gwr: local design singular at unit index " + std::to_string(i) +
                               " (in-bandwidth predictor values are constant)");
        double slope = (mom.swxy - mom.swx * mom.swy / mom.sw) / sxx_c;
        double a = (mom.swy - slope * mom.swx) / mom.sw;
        fit.fitted[i] = a;  // local fit evaluated at x_i (u = 0)
        fit.local_slopes[i] = slope;
        fit.local_intercepts[i] = a - slope * x[i];
        double det = mom.sw * mom.swxx - mom.swx * mom.swx;
        trace.add(mom.swxx / det);  // S_ii; self-weight is 1 for both kernels
    }
    fit.hat_trace = trace.value();
    finish_fit(fit, y, weights, moran, &warnings);
    return fit;
}

// ---------------------------------------------------------------------------
// Comparison report
// ---------------------------------------------------------------------------

std::vector<ModelReportRow> compare_models(
    const std::vector<std::pair<std::string, const SpatialFit*>>& fits) {
    if (fits.empty()) throw DataError("compare_models: no fits");
    for (const auto& [name, fit] : fits)
        if (fit->outcome_digest != fits.front().second->outcome_digest)
            throw DataError("compare_models: fit '" + name +
                            "' was computed on a different outcome vector");

    std::vector<ModelReportRow> rows;
    rows.reserve(fits.size());
    for (const auto& [name, fit] : fits) {
        ModelReportRow r;
        r.indicator = name;
        r.model = fit->model == SpatialFit::Model::ols ? "ols" : "gwr";
        r.r2_adjusted = fit->r2_adjusted;
        r.aicc = fit->aicc;
        r.moran_i = fit->moran_i;
        r.moran_p = fit->moran_p;
        r.spatial_dependence = fit->moran_p.has_value() && *fit->moran_p < 0.05;
        rows.push_back(std::move(r));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ModelReportRow& a, const ModelReportRow& b) { return a.aicc < b.aicc; });
    rows.front().best_fit = true;
    return rows;
}

}  // namespace geoses
