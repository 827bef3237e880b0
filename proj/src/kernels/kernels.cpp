#include "geoses/kernels.hpp"

#include <cstdlib>
#include <mutex>
#include <string>

#include "geoses/error.hpp"

namespace geoses::kernels {

bool avx2_available() {
#if defined(GEOSES_HAVE_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

Backend select_backend() {
    std::string mode = "auto";
    if (const char* env = std::getenv("GEOSES_KERNELS")) mode = env;
    if (mode == "scalar") return Backend::scalar;
    if (mode == "avx2") {
        if (!avx2_available())
            throw ConfigError("GEOSES_KERNELS=avx2 requested but AVX2 is not available");
        return Backend::avx2;
    }
    if (mode != "auto")
        throw ConfigError("GEOSES_KERNELS must be one of scalar, avx2, auto (got '" + mode + "')");
    return avx2_available() ? Backend::avx2 : Backend::scalar;
}

Backend cached_backend() {
    static Backend b = select_backend();
    return b;
}

}  // namespace

Backend active_backend() { return cached_backend(); }

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "unknown";
}

double sum(std::span<const double> x) {
#if defined(GEOSES_HAVE_AVX2)
    if (cached_backend() == Backend::avx2) return avx2::sum(x);
#endif
    return scalar::sum(x);
}

double dot(std::span<const double> a, std::span<const double> b) {
#if defined(GEOSES_HAVE_AVX2)
    if (cached_backend() == Backend::avx2) return avx2::dot(a, b);
#endif
    return scalar::dot(a, b);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
#if defined(GEOSES_HAVE_AVX2)
    if (cached_backend() == Backend::avx2) return avx2::axpy(alpha, x, y);
#endif
    return scalar::axpy(alpha, x, y);
}

WlsMoments wls_moments(std::span<const double> w, std::span<const double> x,
                       std::span<const double> y) {
#if defined(GEOSES_HAVE_AVX2)
    if (cached_backend() == Backend::avx2) return avx2::wls_moments(w, x, y);
#endif
    return scalar::wls_moments(w, x, y);
}

void squared_distances(std::span<const double> xs, std::span<const double> ys, double cx,
                       double cy, std::span<double> out) {
#if defined(GEOSES_HAVE_AVX2)
    if (cached_backend() == Backend::avx2) return avx2::squared_distances(xs, ys, cx, cy, out);
#endif
    return scalar::squared_distances(xs, ys, cx, cy, out);
}

}  // namespace geoses::kernels
