#include "geoses/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geoses/error.hpp"
#include "geoses/kernels.hpp"
#include "geoses/stats.hpp"

namespace geoses {

void CorrelationMatrix::validate() const {
    std::size_t k = size();
    if (values.size() != k * k) throw NumericError("correlation matrix: shape mismatch");
    for (std::size_t i = 0; i < k; ++i) {
        if (at(i, i) != 1.0)
            throw NumericError("correlation matrix: diagonal not 1 at " + variable_names[i]);
        for (std::size_t j = 0; j < k; ++j) {
            double v = at(i, j);
            if (!(v >= -1.0 && v <= 1.0))
                throw NumericError("correlation matrix: entry out of [-1,1] at (" +
                                   variable_names[i] + ", " + variable_names[j] + ")");
            if (at(i, j) != at(j, i))
                throw NumericError("correlation matrix: not symmetric at (" + variable_names[i] +
                                   ", " + variable_names[j] + ")");
        }
    }
}

CorrelationMatrix correlation(const std::vector<std::vector<double>>& columns,
                              const std::vector<std::string>& names) {
    if (columns.size() != names.size()) throw NumericError("correlation: names/columns mismatch");
    std::size_t k = columns.size();
    if (k == 0) throw NumericError("correlation: no columns");
    std::size_t n = columns[0].size();
    if (n < 3) throw NumericError("correlation: needs at least 3 rows");
    for (const auto& c : columns)
        if (c.size() != n) throw NumericError("correlation: ragged columns");
    for (std::size_t j = 0; j < k; ++j)
        if (stats::is_constant(columns[j]))
            throw NumericError("constant column: " + names[j]);

    // center once, then pairwise dots
    std::vector<std::vector<double>> centered(k);
    std::vector<double> sumsq(k);
    for (std::size_t j = 0; j < k; ++j) {
        double mu = stats::mean(columns[j]);
        centered[j].resize(n);
        for (std::size_t i = 0; i < n; ++i) centered[j][i] = columns[j][i] - mu;
        sumsq[j] = kernels::dot(centered[j], centered[j]);
    }

    CorrelationMatrix corr;
    corr.variable_names = names;
    corr.values.assign(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        corr.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < k; ++j) {
            double r = kernels::dot(centered[i], centered[j]) / std::sqrt(sumsq[i] * sumsq[j]);
            r = std::clamp(r, -1.0, 1.0);
            corr.at(i, j) = r;
            corr.at(j, i) = r;
        }
    }
    return corr;
}

std::vector<std::vector<double>> standardize_columns(const std::vector<std::vector<double>>& columns,
                                                     const std::vector<std::string>& names) {
    std::vector<std::vector<double>> z(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j)
        z[j] = stats::zscores(columns[j], j < names.size() ? names[j] : "");
    return z;
}

namespace {

// Cyclic Jacobi for a symmetric matrix. a is k x k row-major and is destroyed;
// v receives the eigenvectors as columns. Matrices here are at most 46 x 46,
// where Jacobi is simple, accurate, and fully deterministic.
void jacobi_eigen(std::vector<double>& a, std::vector<double>& v, std::size_t k) {
    auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * k + j]; };
    auto V = [&](std::size_t i, std::size_t j) -> double& { return v[i * k + j]; };

    v.assign(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) V(i, i) = 1.0;
    if (k == 1) return;

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) off += A(i, j) * A(i, j);
        if (off <= 1e-28 * static_cast<double>(k * k)) return;

        for (std::size_t p = 0; p < k - 1; ++p) {
            for (std::size_t q = p + 1; q < k; ++q) {
                double apq = A(p, q);
                if (apq == 0.0) continue;
                double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                double app = A(p, p), aqq = A(q, q);
                A(p, p) = app - t * apq;
                A(q, q) = aqq + t * apq;
                A(p, q) = 0.0;
                A(q, p) = 0.0;
                // plain Givens updates; for the 45-degree case (equal
                // diagonal) they keep the two eigenvector entries bit-equal,
                // so downstream magnitude tie-breaks fire deterministically
                for (std::size_t i = 0; i < k; ++i) {
                    if (i != p && i != q) {
                        double aip = A(i, p), aiq = A(i, q);
                        A(i, p) = c * aip - s * aiq;
                        A(p, i) = A(i, p);
                        A(i, q) = s * aip + c * aiq;
                        A(q, i) = A(i, q);
                    }
                    double vip = V(i, p), viq = V(i, q);
                    V(i, p) = c * vip - s * viq;
                    V(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    throw NumericError("eigen-decomposition did not converge");
}

// anchor = index of the entry with largest magnitude (lowest index on ties)
std::size_t anchor_index(const std::vector<double>& v, std::size_t k, std::size_t col,
                         std::size_t n_cols) {
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t i = 0; i < k; ++i) {
        double a = std::abs(v[i * n_cols + col]);
        if (a > best_abs) {
            best_abs = a;
            best = i;
        }
    }
    return best;
}

}  // namespace

PcaResult run_pca(const CorrelationMatrix& corr,
                  const std::vector<std::vector<double>>& standardized_columns) {
    corr.validate();
    std::size_t k = corr.size();

    std::vector<double> a = corr.values;
    std::vector<double> vecs;
    jacobi_eigen(a, vecs, k);

    struct Comp {
        double eigenvalue;
        std::size_t anchor;
        std::size_t source;  // column in vecs
    };
    std::vector<Comp> comps(k);
    for (std::size_t j = 0; j < k; ++j) {
        // canonical sign: anchor entry positive
        std::size_t anc = anchor_index(vecs, k, j, k);
        if (vecs[anc * k + j] < 0.0)
            for (std::size_t i = 0; i < k; ++i) vecs[i * k + j] = -vecs[i * k + j];
        comps[j] = {a[j * k + j], anc, j};
    }
    std::stable_sort(comps.begin(), comps.end(), [](const Comp& x, const Comp& y) {
        if (x.eigenvalue != y.eigenvalue) return x.eigenvalue > y.eigenvalue;
        return x.anchor < y.anchor;
    });

    PcaResult res;
    res.variable_names = corr.variable_names;
    res.eigenvalues.resize(k);
    res.loadings.assign(k * k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        double ev = comps[j].eigenvalue;
        if (ev < -1e-8)
            throw NumericError("correlation matrix is not positive semidefinite (eigenvalue " +
                               std::to_string(ev) + ")");
        res.eigenvalues[j] = std::max(ev, 0.0);
        for (std::size_t i = 0; i < k; ++i)
            res.loadings[i * k + j] = vecs[i * k + comps[j].source];
    }

    double total = kernels::sum(res.eigenvalues);
    res.explained_fraction.resize(k);
    for (std::size_t j = 0; j < k; ++j) res.explained_fraction[j] = res.eigenvalues[j] / total;

    if (!standardized_columns.empty()) {
        if (standardized_columns.size() != k)
            throw NumericError("run_pca: standardized data has wrong number of columns");
        std::size_t n = standardized_columns[0].size();
        res.scores.assign(k, std::vector<double>(n, 0.0));
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t var = 0; var < k; ++var)
                kernels::axpy(res.loading(var, j), standardized_columns[var], res.scores[j]);
    }
    return res;
}

std::size_t select_components(const PcaResult& result, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw ConfigError("variance threshold must be in (0, 1]");
    double cum = 0.0;
    for (std::size_t m = 0; m < result.eigenvalues.size(); ++m) {
        cum += result.explained_fraction[m];
        if (cum >= threshold) return m + 1;
    }
    return result.eigenvalues.size();
}

}  // namespace geoses
