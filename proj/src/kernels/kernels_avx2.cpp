#if defined(GEOSES_HAVE_AVX2)

#include <immintrin.h>

#include <cassert>

#include "geoses/kernels.hpp"

namespace geoses::kernels::avx2 {
namespace {

inline __m256d vabs(__m256d x) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

// 4-lane Neumaier accumulator; lanes are combined (and the scalar tail
// appended) through a scalar Accum at the end, so a vector reduction differs
// from the scalar reference only by the summation order inside the
// compensated scheme.
struct VAccum {
    __m256d s = _mm256_setzero_pd();
    __m256d c = _mm256_setzero_pd();

    inline void add(__m256d x) {
        __m256d t = _mm256_add_pd(s, x);
        __m256d big_s = _mm256_cmp_pd(vabs(s), vabs(x), _CMP_GE_OQ);
        __m256d err_s = _mm256_add_pd(_mm256_sub_pd(s, t), x);  // |s| >= |x|
        __m256d err_x = _mm256_add_pd(_mm256_sub_pd(x, t), s);  // |x| >  |s|
        c = _mm256_add_pd(c, _mm256_blendv_pd(err_x, err_s, big_s));
        s = t;
    }

    inline void fold_into(Accum& acc) const {
        alignas(32) double sl[4], cl[4];
        _mm256_store_pd(sl, s);
        _mm256_store_pd(cl, c);
        for (double v : sl) acc.add(v);
        for (double v : cl) acc.add(v);
    }
};

}  // namespace

double sum(std::span<const double> x) {
    VAccum v;
    std::size_t i = 0;
    for (; i + 4 <= x.size(); i += 4) v.add(_mm256_loadu_pd(x.data() + i));
    Accum acc;
    v.fold_into(acc);
    for (; i < x.size(); ++i) acc.add(x[i]);
    return acc.value();
}

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    VAccum v;
    std::size_t i = 0;
    for (; i + 4 <= a.size(); i += 4) {
        __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
        v.add(p);
    }
    Accum acc;
    v.fold_into(acc);
    for (; i < a.size(); ++i) acc.add(a[i] * b[i]);
    return acc.value();
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= x.size(); i += 4) {
        __m256d xi = _mm256_loadu_pd(x.data() + i);
        __m256d yi = _mm256_loadu_pd(y.data() + i);
        _mm256_storeu_pd(y.data() + i, _mm256_add_pd(yi, _mm256_mul_pd(va, xi)));
    }
    for (; i < x.size(); ++i) y[i] += alpha * x[i];
}

WlsMoments wls_moments(std::span<const double> w, std::span<const double> x,
                       std::span<const double> y) {
    assert(w.size() == x.size() && w.size() == y.size());
    VAccum vw, vwx, vwxx, vwy, vwxy;
    std::size_t i = 0;
    for (; i + 4 <= w.size(); i += 4) {
        __m256d wi = _mm256_loadu_pd(w.data() + i);
        __m256d xi = _mm256_loadu_pd(x.data() + i);
        __m256d yi = _mm256_loadu_pd(y.data() + i);
        __m256d wx = _mm256_mul_pd(wi, xi);
        vw.add(wi);
        vwx.add(wx);
        vwxx.add(_mm256_mul_pd(wx, xi));
        vwy.add(_mm256_mul_pd(wi, yi));
        vwxy.add(_mm256_mul_pd(wx, yi));
    }
    Accum sw, swx, swxx, swy, swxy;
    vw.fold_into(sw);
    vwx.fold_into(swx);
    vwxx.fold_into(swxx);
    vwy.fold_into(swy);
    vwxy.fold_into(swxy);
    for (; i < w.size(); ++i) {
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
    __m256d vcx = _mm256_set1_pd(cx);
    __m256d vcy = _mm256_set1_pd(cy);
    std::size_t i = 0;
    for (; i + 4 <= xs.size(); i += 4) {
        __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs.data() + i), vcx);
        __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys.data() + i), vcy);
        __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        _mm256_storeu_pd(out.data() + i, d2);
    }
    for (; i < xs.size(); ++i) {
        double dx = xs[i] - cx;
        double dy = ys[i] - cy;
        out[i] = dx * dx + dy * dy;
    }
}

}  // namespace geoses::kernels::avx2

#endif  // GEOSES_HAVE_AVX2
