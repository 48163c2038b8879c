#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chaoskit/sequence.hpp"

namespace chaoskit {

inline constexpr double kSimplexSumTolerance = 1e-12;
inline constexpr double kMarginalTolerance = 1e-9;

// A point of the probability simplex over the 4^k k-mers, in kmer_index order.
class KmerDistribution {
public:
    // Throws ValidationError unless the vector has 4^k nonnegative entries
    // summing to 1 within kSimplexSumTolerance.
    KmerDistribution(int k, std::vector<double> theta);

    static KmerDistribution uniform(int k);
    static KmerDistribution point_mass(const Kmer& w);

    int order() const { return k_; }
    const std::vector<double>& theta() const { return theta_; }
    double operator[](std::uint64_t idx) const { return theta_[idx]; }
    std::size_t size() const { return theta_.size(); }

private:
    int k_;
    std::vector<double> theta_;
};

// counts / sum(counts). Throws ValidationError on an all-zero vector.
KmerDistribution empirical_distribution(const KmerFrequencyVector& counts);

// Entry v (a (k-1)-mer index) is sum_a theta_{va} - sum_a theta_{av}.
// Throws RangeError for k < 2.
std::vector<double> marginal_residual(const KmerDistribution& theta);
double max_abs(const std::vector<double>& v);
bool is_marginal_consistent(const KmerDistribution& theta, double tolerance = kMarginalTolerance);

// sum_i |a_i - b_i|. Throws ValidationError on differing orders.
double total_variation_l1(const KmerDistribution& a, const KmerDistribution& b);

// Header "kmer,count", one row per k-mer in index order.
void write_counts_csv(std::ostream& out, const KmerFrequencyVector& counts);
// Header "kmer,theta", one row per k-mer in index order, shortest round-trip digits.
void write_distribution_csv(std::ostream& out, const KmerDistribution& theta);

struct ParsedDistribution {
    KmerDistribution distribution;
    bool renormalized;  // input sum differed from 1 by more than 1e-12
};

// Accepts rows in any order; k-mers not listed get 0. Rejects negative or
// non-finite values, mixed k-mer lengths, duplicates, and sums further than
// 1e-6 from 1.
ParsedDistribution read_distribution_csv(std::istream& in);
ParsedDistribution read_distribution_file(const std::string& path);

// Builds a distribution from arbitrary nonnegative weights (normalised).
KmerDistribution normalize_weights(int k, const std::vector<double>& weights);

}  // namespace chaoskit
