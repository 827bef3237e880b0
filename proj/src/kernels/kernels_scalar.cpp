#include <cassert>

#include "geoses/kernels.hpp"

namespace geoses::kernels::scalar {

double sum(std::span<const double> x) {
    Accum a;
    for (double v : x) a.add(v);
    return a.value();
}

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    Accum acc;
    for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
    return acc.value();
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

WlsMoments wls_moments(std::span<const double> w, std::span<const double> x,
                       std::span<const double> y) {
    assert(w.size() == x.size() && w.size() == y.size());
    Accum sw, swx, swxx, swy, swxy;
    for (std::size_t i = 0; i < w.size(); ++i) {
        double wi = w[i];
        double wx = wi * x[i];
        sw.add(wi);
        swx.add(wx);
        swxx.add(wx * x[i]);
        swy.add(wi * y[i]);
        swxy.add(wx * y[i]);
    }
    return {sw.value(), swx.value(), swxx.value(), swy.value(), swxy.value()};
}

void squared_distances(std::span<const double> xs, std::span<const double> ys, double cx,
                       double cy, std::span<double> out) {
    assert(xs.size() == ys.size() && xs.size() == out.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double dx = xs[i] - cx;
        double dy = ys[i] - cy;
        out[i] = dx * dx + dy * dy;
    }
}

}  // namespace geoses::kernels::scalar
