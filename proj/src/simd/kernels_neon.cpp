// Built only on aarch64, where Advanced SIMD is part of the base ISA.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <limits>

#include "chaoskit/simd/kernels.hpp"

namespace chaoskit::simd::neon {

namespace {

// Same tiling contract as the AVX2 variant: one 2-lane accumulator per
// (row, vector) pair, so the tile shape never changes the bits.
template <int R, int C>
void dot_tile(const double* a, std::size_t rows, std::size_t cols, const double* xs, double* ys, std::size_t i,
              std::size_t c) {
    const std::size_t cols2 = cols & ~std::size_t{1};
    float64x2_t acc[R][C];
    for (int r = 0; r < R; ++r)
        for (int q = 0; q < C; ++q) acc[r][q] = vdupq_n_f64(0.0);
    const double* arow[R];
    const double* x[C];
    for (int r = 0; r < R; ++r) arow[r] = a + (i + r) * cols;
    for (int q = 0; q < C; ++q) x[q] = xs + (c + q) * cols;
    for (std::size_t j = 0; j < cols2; j += 2) {
        float64x2_t av[R];
        for (int r = 0; r < R; ++r) av[r] = vld1q_f64(arow[r] + j);
        for (int q = 0; q < C; ++q) {
            const float64x2_t xv = vld1q_f64(x[q] + j);
            for (int r = 0; r < R; ++r) acc[r][q] = vfmaq_f64(acc[r][q], av[r], xv);
        }
    }
    for (int r = 0; r < R; ++r) {
        for (int q = 0; q < C; ++q) {
            double s = vaddvq_f64(acc[r][q]);
            for (std::size_t j = cols2; j < cols; ++j) s = std::fma(arow[r][j], x[q][j], s);
            ys[(c + q) * rows + i + r] = s;
        }
    }
}

void gemv_batch(const double* a, std::size_t rows, std::size_t cols, const double* xs, std::size_t m,
                double* ys) {
    std::size_t i = 0;
    for (; i + 2 <= rows; i += 2) {
        std::size_t c = 0;
        for (; c + 4 <= m; c += 4) dot_tile<2, 4>(a, rows, cols, xs, ys, i, c);
        for (; c < m; ++c) dot_tile<2, 1>(a, rows, cols, xs, ys, i, c);
    }
    for (; i < rows; ++i) {
        std::size_t c = 0;
        for (; c + 4 <= m; c += 4) dot_tile<1, 4>(a, rows, cols, xs, ys, i, c);
        for (; c < m; ++c) dot_tile<1, 1>(a, rows, cols, xs, ys, i, c);
    }
}

ChordBounds chord(const double* theta, const double* d, std::size_t n) {
    ChordBounds b{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    float64x2_t lo = vdupq_n_f64(b.lo), hi = vdupq_n_f64(b.hi);
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t dv = vld1q_f64(d + i);
        const float64x2_t t = vdivq_f64(vnegq_f64(vld1q_f64(theta + i)), dv);
        lo = vmaxq_f64(lo, vbslq_f64(vcgtq_f64(dv, zero), t, vdupq_n_f64(b.lo)));
        hi = vminq_f64(hi, vbslq_f64(vcltq_f64(dv, zero), t, vdupq_n_f64(b.hi)));
    }
    b.lo = vmaxvq_f64(lo);
    b.hi = vminvq_f64(hi);
    for (; i < n; ++i) {
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
    const float64x2_t av = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), av, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s = std::fma(a[i], b[i], s);
    return s;
}

double l1(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += std::fabs(a[i] - b[i]);
    return s;
}

}  // namespace

extern const KernelTable kTable{"neon", gemv_batch, chord, axpy, dot, l1};

}  // namespace chaoskit::simd::neon

#endif
