#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

// Dense double-precision inner loops used by the sampler and the distance
// code. Every kernel has a scalar reference; vector variants are compiled in
// separate translation units and picked at runtime from what the CPU reports.
// CHAOSKIT_SIMD=scalar|avx2|neon forces a variant (if available).

namespace chaoskit::simd {

struct ChordBounds {
    double lo;  // max over d_i > 0 of -theta_i / d_i  (-inf when none)
    double hi;  // min over d_i < 0 of -theta_i / d_i  (+inf when none)
};

struct KernelTable {
    const char* name;

    // ys[c] = A * xs[c] for c in [0, m). A is rows x cols, row-major.
    // xs holds m vectors of length cols back to back, ys m vectors of length rows.
    // Every output element is one dot product with a fixed summation order,
    // so a batch of m produces the same bits as m calls with m = 1.
    void (*gemv_rowmajor_batch)(const double* a, std::size_t rows, std::size_t cols, const double* xs,
                                std::size_t m, double* ys);

    ChordBounds (*chord_bounds)(const double* theta, const double* d, std::size_t n);

    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

    double (*dot)(const double* a, const double* b, std::size_t n);

    double (*l1_distance)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the variant was not compiled in or the CPU lacks the features.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// Variants usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

// Selected once per process: the environment override if set and usable,
// otherwise the widest available variant.
const KernelTable& active_kernels();

const KernelTable* find_kernels(std::string_view name);

inline void gemv_rowmajor(const KernelTable& kt, const double* a, std::size_t rows, std::size_t cols,
                          const double* x, double* y) {
    kt.gemv_rowmajor_batch(a, rows, cols, x, 1, y);
}

}  // namespace chaoskit::simd
