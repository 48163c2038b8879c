#include <cmath>
#include <limits>

#include "chaoskit/simd/kernels.hpp"

namespace chaoskit::simd {

namespace {

void gemv_batch(const double* a, std::size_t rows, std::size_t cols, const double* xs, std::size_t m,
                double* ys) {
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = a + i * cols;
        for (std::size_t c = 0; c < m; ++c) {
            const double* x = xs + c * cols;
            double s = 0.0;
            for (std::size_t j = 0; j < cols; ++j) s += row[j] * x[j];
            ys[c * rows + i] = s;
        }
    }
}

ChordBounds chord(const double* theta, const double* d, std::size_t n) {
    ChordBounds b{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] > 0.0) {
            const double t = -theta[i] / d[i];
            if (t > b.lo) b.lo = t;
        } else if (d[i] < 0.0) {
            const double t = -theta[i] / d[i];
            if (t < b.hi) b.hi = t;
        }
    }
    return b;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double l1(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i] - b[i]);
    return s;
}

constexpr KernelTable kScalar{"scalar", gemv_batch, chord, axpy, dot, l1};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace chaoskit::simd
