#include "chaoskit/sampler.hpp"

#include <array>
#include <cmath>
#include <mutex>

#include "chaoskit/errors.hpp"
#include "chaoskit/simd/kernels.hpp"

namespace chaoskit {

ConstraintSystem build_constraints(int k) {
    if (k < kMinConstraintOrder || k > kMaxConstraintOrder)
        throw RangeError("constraint systems are supported for 2 <= k <= 6, got k=" + std::to_string(k));
    const auto m = static_cast<Eigen::Index>(kmer_space(k));
    const auto vertices = static_cast<Eigen::Index>(kmer_space(k - 1));

    ConstraintSystem sys;
    sys.k = k;
    sys.B = Eigen::MatrixXd::Zero(vertices + 1, m);
    sys.B.row(0).setOnes();
    for (Eigen::Index w = 0; w < m; ++w) {
        sys.B(1 + (w >> 2), w) += 1.0;
        sys.B(1 + (w & (vertices - 1)), w) -= 1.0;
    }
    sys.b = Eigen::VectorXd::Zero(vertices + 1);
    sys.b(0) = 1.0;

    // B^T P = Q R. The singular values of R are those of B; the first `rank`
    // columns of Q span the row space of B and the rest span its kernel.
    const Eigen::MatrixXd bt = sys.B.transpose();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(bt);
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(vertices + 1, vertices + 1).triangularView<Eigen::Upper>();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(r);
    sys.singular_values = svd.singularValues();
    const double cutoff = kRankRelativeThreshold * sys.singular_values(0);
    sys.numerical_rank = 0;
    for (Eigen::Index i = 0; i < sys.singular_values.size(); ++i)
        if (sys.singular_values(i) > cutoff) ++sys.numerical_rank;

    const Eigen::Index nullity = m - sys.numerical_rank;
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(m, nullity);
    basis.bottomRows(nullity).setIdentity();
    basis.applyOnTheLeft(qr.householderQ());
    sys.kernel_basis = basis;
    return sys;
}

std::shared_ptr<const ConstraintSystem> shared_constraints(int k) {
    if (k < kMinConstraintOrder || k > kMaxConstraintOrder)
        throw RangeError("constraint systems are supported for 2 <= k <= 6, got k=" + std::to_string(k));
    static std::array<std::once_flag, kMaxConstraintOrder + 1> once;
    static std::array<std::shared_ptr<const ConstraintSystem>, kMaxConstraintOrder + 1> cache;
    std::call_once(once[static_cast<std::size_t>(k)],
                   [k] { cache[static_cast<std::size_t>(k)] = std::make_shared<ConstraintSystem>(build_constraints(k)); });
    return cache[static_cast<std::size_t>(k)];
}

double constraint_residual(const ConstraintSystem& sys, std::span<const double> theta) {
    if (theta.size() != static_cast<std::size_t>(sys.B.cols())) throw ValidationError("dimension mismatch");
    const Eigen::Map<const Eigen::VectorXd> x(theta.data(), static_cast<Eigen::Index>(theta.size()));
    return (sys.B * x - sys.b).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

HitAndRunChain::HitAndRunChain(std::shared_ptr<const ConstraintSystem> sys, std::uint64_t seed)
    : sys_(std::move(sys)), rng_(seed) {
    if (!sys_) throw ValidationError("hit-and-run needs a constraint system");
    const auto m = static_cast<std::size_t>(sys_->kernel_basis.rows());
    theta_.assign(m, 1.0 / static_cast<double>(m));
    z_.resize(static_cast<std::size_t>(sys_->kernel_dimension()));
    direction_.resize(m);
}

void HitAndRunChain::draw_coefficients(double* z) {
    for (std::size_t i = 0; i < z_.size(); ++i) z[i] = normal_(rng_);
}

void HitAndRunChain::finish_step(double* direction) {
    const auto& kt = simd::active_kernels();
    const std::size_t m = theta_.size();
    const std::size_t dim = z_.size();
    const double* basis = sys_->kernel_basis.data();

    double norm = std::sqrt(kt.dot(direction, direction, m));
    int redraws = 0;
    while (!(norm >= 1e-14)) {
        if (++redraws > kMaxDegenerateRedraws)
            throw InconsistencyError("hit-and-run direction degenerate after 100 redraws");
        draw_coefficients(z_.data());
        simd::gemv_rowmajor(kt, basis, m, dim, z_.data(), direction);
        norm = std::sqrt(kt.dot(direction, direction, m));
    }
    const double inv = 1.0 / norm;
    for (std::size_t i = 0; i < m; ++i) direction[i] *= inv;

    const simd::ChordBounds chord = kt.chord_bounds(theta_.data(), direction, m);
    if (!std::isfinite(chord.lo) || !std::isfinite(chord.hi))
        throw InconsistencyError("unbounded hit-and-run chord");
    double t = 0.0;
    if (chord.lo < chord.hi) t = std::uniform_real_distribution<double>(chord.lo, chord.hi)(rng_);
    kt.axpy(t, direction, theta_.data(), m);
    ++steps_;
}

void HitAndRunChain::step() {
    const auto& kt = simd::active_kernels();
    draw_coefficients(z_.data());
    simd::gemv_rowmajor(kt, sys_->kernel_basis.data(), theta_.size(), z_.size(), z_.data(), direction_.data());
    finish_step(direction_.data());
}

void HitAndRunChain::run(std::uint64_t iterations) {
    for (std::uint64_t it = 0; it < iterations; ++it) step();
}

void HitAndRunChain::run_together(std::span<HitAndRunChain> chains, std::uint64_t iterations) {
    if (chains.empty()) return;
    const auto& sys = chains.front().sys_;
    for (const auto& c : chains)
        if (c.sys_ != sys) throw ValidationError("chains advanced together must share a constraint system");
    const auto& kt = simd::active_kernels();
    const std::size_t m = chains.front().theta_.size();
    const std::size_t dim = chains.front().z_.size();
    const std::size_t count = chains.size();
    std::vector<double> zs(dim * count);
    std::vector<double> directions(m * count);
    for (std::uint64_t it = 0; it < iterations; ++it) {
        for (std::size_t c = 0; c < count; ++c) chains[c].draw_coefficients(zs.data() + c * dim);
        kt.gemv_rowmajor_batch(sys->kernel_basis.data(), m, dim, zs.data(), count, directions.data());
        for (std::size_t c = 0; c < count; ++c) chains[c].finish_step(directions.data() + c * m);
    }
}

KmerDistribution HitAndRunChain::result() const {
    std::vector<double> out = theta_;
    double sum = 0.0;
    for (double& v : out) {
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    for (double& v : out) v /= sum;
    return KmerDistribution(sys_->k, std::move(out));
}

std::uint64_t default_iterations(int k) {
    return 1000ull * static_cast<std::uint64_t>(shared_constraints(k)->kernel_dimension());
}

KmerDistribution hit_and_run_sample(int k, std::uint64_t iterations, std::uint64_t seed) {
    if (iterations < 1) throw ValidationError("hit-and-run needs at least one iteration");
    HitAndRunChain chain(shared_constraints(k), seed);
    chain.run(iterations);
    return chain.result();
}

std::vector<KmerDistribution> hit_and_run_samples(int k, std::uint64_t iterations,
                                                  std::span<const std::uint64_t> seeds) {
    if (iterations < 1) throw ValidationError("hit-and-run needs at least one iteration");
    auto sys = shared_constraints(k);
    std::vector<HitAndRunChain> chains;
    chains.reserve(seeds.size());
    for (auto seed : seeds) chains.emplace_back(sys, seed);
    HitAndRunChain::run_together(chains, iterations);
    std::vector<KmerDistribution> out;
    out.reserve(chains.size());
    for (const auto& c : chains) out.push_back(c.result());
    return out;
}

}  // namespace chaoskit
