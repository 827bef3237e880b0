#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>

// Reduction kernels underlying every statistic in the library. Each kernel
// has a scalar reference implementation and, on x86-64, an AVX2 variant; the
// active variant is picked once at runtime (override with GEOSES_KERNELS=
// scalar|avx2|auto). All summations are Neumaier-compensated so that results
// are stable to well beyond the 15 significant digits used in exports,
// regardless of how the inputs were partitioned upstream.

namespace geoses::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
std::string_view backend_name(Backend b);
bool avx2_available();

// Compensated scalar accumulator, usable for streaming sums.
struct Accum {
    double s = 0.0;
    double c = 0.0;

    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

struct WlsMoments {
    double sw = 0.0;   // sum of weights
    double swx = 0.0;  // sum of w*x
    double swxx = 0.0; // sum of w*x*x
    double swy = 0.0;  // sum of w*y
    double swxy = 0.0; // sum of w*x*y
};

double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
WlsMoments wls_moments(std::span<const double> w, std::span<const double> x,
                       std::span<const double> y);
// out[i] = (xs[i]-cx)^2 + (ys[i]-cy)^2
void squared_distances(std::span<const double> xs, std::span<const double> ys, double cx,
                       double cy, std::span<double> out);

// Per-backend entry points, exposed so the equivalence tests can pin the two
// implementations against each other.
namespace scalar {
double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
WlsMoments wls_moments(std::span<const double> w, std::span<const double> x,
                       std::span<const double> y);
void squared_distances(std::span<const double> xs, std::span<const double> ys, double cx,
                       double cy, std::span<double> out);
}  // namespace scalar

#if defined(GEOSES_HAVE_AVX2)
namespace avx2 {
double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
WlsMoments wls_moments(std::span<const double> w, std::span<const double> x,
                       std::span<const double> y);
void squared_distances(std::span<const double> xs, std::span<const double> ys, double cx,
                       double cy, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace geoses::kernels
