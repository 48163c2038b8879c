#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "chaoskit/distribution.hpp"

namespace chaoskit {

inline constexpr int kMinConstraintOrder = 2;
inline constexpr int kMaxConstraintOrder = 6;

// Linear system B theta = b describing normalisation plus marginal
// consistency. Row 0 is all ones; row 1 + v holds +1 on k-mers with prefix v
// and -1 on k-mers with suffix v (a k-mer with both cancels to 0).
struct ConstraintSystem {
    int k = 0;
    Eigen::MatrixXd B;
    Eigen::VectorXd b;
    Eigen::VectorXd singular_values;  // descending
    int numerical_rank = 0;
    // Orthonormal columns spanning ker(B); 4^k x (4^k - numerical_rank).
    // Row-major so the sampler's matrix-vector products read it as dot products.
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> kernel_basis;

    int kernel_dimension() const { return static_cast<int>(kernel_basis.cols()); }
};

inline constexpr double kRankRelativeThreshold = 1e-10;

// Rank from the singular values of the R factor of a column-pivoted QR of
// B^T (threshold 1e-10 * sigma_max); kernel basis from the trailing columns
// of the orthogonal factor. Throws RangeError unless 2 <= k <= 6.
ConstraintSystem build_constraints(int k);

// Lazily built, shared, immutable systems; safe to call from any thread.
std::shared_ptr<const ConstraintSystem> shared_constraints(int k);

// max_r |(B theta - b)_r|
double constraint_residual(const ConstraintSystem& sys, std::span<const double> theta);

inline constexpr int kMaxDegenerateRedraws = 100;

// One hit-and-run chain on {theta >= 0, B theta = b}, started at the uniform
// distribution. The chain owns its generator; the constraint system is shared.
class HitAndRunChain {
public:
    HitAndRunChain(std::shared_ptr<const ConstraintSystem> sys, std::uint64_t seed);

    void step();
    void run(std::uint64_t iterations);

    const std::shared_ptr<const ConstraintSystem>& system() const { return sys_; }
    const std::vector<double>& state() const { return theta_; }
    std::uint64_t steps_taken() const { return steps_; }
    // Current state with tiny negative drift clamped to 0 and renormalised.
    KmerDistribution result() const;

    // Advances every chain by `iterations` steps, sharing one pass over the
    // kernel basis per step. Results are bitwise identical to calling run()
    // on each chain separately.
    static void run_together(std::span<HitAndRunChain> chains, std::uint64_t iterations);

private:
    void draw_coefficients(double* z);
    // Second half of a step, after direction = N z has been formed.
    void finish_step(double* direction);

    std::shared_ptr<const ConstraintSystem> sys_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::vector<double> theta_;
    std::vector<double> z_;
    std::vector<double> direction_;
    std::uint64_t steps_ = 0;
};

// 1000 * kernel dimension.
std::uint64_t default_iterations(int k);

KmerDistribution hit_and_run_sample(int k, std::uint64_t iterations, std::uint64_t seed);
// Independent chains, one per seed, advanced together.
std::vector<KmerDistribution> hit_and_run_samples(int k, std::uint64_t iterations,
                                                  std::span<const std::uint64_t> seeds);

}  // namespace chaoskit
