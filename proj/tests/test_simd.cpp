#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "chaoskit/simd/kernels.hpp"

using namespace chaoskit::simd;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar kernels are always available and listed first") {
    const auto all = available_kernels();
    REQUIRE_FALSE(all.empty());
    CHECK(std::string(all.front()->name) == "scalar");
    CHECK(find_kernels("scalar") == &scalar_kernels());
    CHECK(find_kernels("nope") == nullptr);
    MESSAGE("active kernels: " << active_kernels().name);
}

TEST_CASE("every variant matches the scalar reference") {
    const auto& ref = scalar_kernels();
    std::mt19937_64 rng(99);
    for (const KernelTable* kt : available_kernels()) {
        CAPTURE(kt->name);
        for (std::size_t n : {1u, 3u, 4u, 7u, 8u, 15u, 16u, 33u, 257u, 1024u}) {
            const auto a = random_vector(rng, n), b = random_vector(rng, n);
            CHECK(kt->dot(a.data(), b.data(), n) == doctest::Approx(ref.dot(a.data(), b.data(), n)).epsilon(1e-12));
            CHECK(kt->l1_distance(a.data(), b.data(), n) ==
                  doctest::Approx(ref.l1_distance(a.data(), b.data(), n)).epsilon(1e-12));

            auto y1 = b, y2 = b;
            kt->axpy(0.37, a.data(), y1.data(), n);
            ref.axpy(0.37, a.data(), y2.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));

            // Chord bounds are exact divisions and comparisons: bitwise equal.
            const auto theta = random_vector(rng, n, 0.0, 1.0);
            auto d = random_vector(rng, n);
            if (n > 2) d[1] = 0.0;
            const auto c1 = kt->chord_bounds(theta.data(), d.data(), n);
            const auto c2 = ref.chord_bounds(theta.data(), d.data(), n);
            CHECK(c1.lo == c2.lo);
            CHECK(c1.hi == c2.hi);
        }
        // All-positive or all-zero directions leave one side unbounded.
        const std::vector<double> theta{0.5, 0.5}, up{1.0, 2.0}, flat{0.0, 0.0};
        CHECK(std::isinf(kt->chord_bounds(theta.data(), up.data(), 2).hi));
        CHECK(kt->chord_bounds(theta.data(), up.data(), 2).lo == -0.25);
        CHECK(std::isinf(kt->chord_bounds(theta.data(), flat.data(), 2).lo));
    }
}

TEST_CASE("batched row-major products") {
    const auto& ref = scalar_kernels();
    std::mt19937_64 rng(7);
    for (const KernelTable* kt : available_kernels()) {
        CAPTURE(kt->name);
        for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{1, 1}, {5, 3}, {16, 12}, {64, 48}, {33, 29}, {256, 192}}) {
            for (std::size_t m : {1u, 2u, 4u, 5u, 9u}) {
                const auto a = random_vector(rng, rows * cols), xs = random_vector(rng, cols * m);
                std::vector<double> got(rows * m), want(rows * m);
                kt->gemv_rowmajor_batch(a.data(), rows, cols, xs.data(), m, got.data());
                ref.gemv_rowmajor_batch(a.data(), rows, cols, xs.data(), m, want.data());
                for (std::size_t i = 0; i < got.size(); ++i)
                    REQUIRE(got[i] == doctest::Approx(want[i]).epsilon(1e-12));

                // A batch gives the same bits as one call per vector.
                std::vector<double> single(rows * m);
                for (std::size_t c = 0; c < m; ++c)
                    gemv_rowmajor(*kt, a.data(), rows, cols, xs.data() + c * cols, single.data() + c * rows);
                REQUIRE(same_bits(got, single));
            }
        }
    }
}
