// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "chaoskit/simd/kernels.hpp"

namespace chaoskit::simd::avx2 {

namespace {

double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// R rows against C vectors. Each (row, vector) pair keeps one 4-lane
// accumulator, reduced by hsum and finished with a scalar tail, whatever the
// tile shape; that is what keeps batched and single calls bitwise equal.
template <int R, int C>
void dot_tile(const double* a, std::size_t rows, std::size_t cols, const double* xs, double* ys, std::size_t i,
              std::size_t c) {
    const std::size_t cols4 = cols & ~std::size_t{3};
    __m256d acc[R][C];
    for (int r = 0; r < R; ++r)
        for (int q = 0; q < C; ++q) acc[r][q] = _mm256_setzero_pd();
    const double* arow[R];
    const double* x[C];
    for (int r = 0; r < R; ++r) arow[r] = a + (i + r) * cols;
    for (int q = 0; q < C; ++q) x[q] = xs + (c + q) * cols;
    for (std::size_t j = 0; j < cols4; j += 4) {
        __m256d av[R];
        for (int r = 0; r < R; ++r) av[r] = _mm256_loadu_pd(arow[r] + j);
        for (int q = 0; q < C; ++q) {
            const __m256d xv = _mm256_loadu_pd(x[q] + j);
            for (int r = 0; r < R; ++r) acc[r][q] = _mm256_fmadd_pd(av[r], xv, acc[r][q]);
        }
    }
    for (int r = 0; r < R; ++r) {
        for (int q = 0; q < C; ++q) {
            double s = hsum(acc[r][q]);
            for (std::size_t j = cols4; j < cols; ++j) s = std::fma(arow[r][j], x[q][j], s);
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
    const __m256d zero = _mm256_setzero_pd();
    const __m256d ninf = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    const __m256d pinf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d lo = ninf, hi = pinf;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dv = _mm256_loadu_pd(d + i);
        const __m256d t = _mm256_div_pd(_mm256_xor_pd(_mm256_loadu_pd(theta + i), sign), dv);
        const __m256d pos = _mm256_cmp_pd(dv, zero, _CMP_GT_OQ);
        const __m256d neg = _mm256_cmp_pd(dv, zero, _CMP_LT_OQ);
        lo = _mm256_max_pd(lo, _mm256_blendv_pd(ninf, t, pos));
        hi = _mm256_min_pd(hi, _mm256_blendv_pd(pinf, t, neg));
    }
    alignas(32) double l[4], h[4];
    _mm256_store_pd(l, lo);
    _mm256_store_pd(h, hi);
    ChordBounds b{l[0], h[0]};
    for (int q = 1; q < 4; ++q) {
        if (l[q] > b.lo) b.lo = l[q];
        if (h[q] < b.hi) b.hi = h[q];
    }
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
    const __m256d av = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s = std::fma(a[i], b[i], s);
    return s;
}

double l1(const double* a, const double* b, std::size_t n) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_and_pd(mask, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
        acc1 = _mm256_add_pd(
            acc1, _mm256_and_pd(mask, _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4))));
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += std::fabs(a[i] - b[i]);
    return s;
}

}  // namespace

extern const KernelTable kTable{"avx2", gemv_batch, chord, axpy, dot, l1};

}  // namespace chaoskit::simd::avx2
