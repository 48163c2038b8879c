#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "chaoskit/distribution.hpp"
#include "chaoskit/errors.hpp"
#include "chaoskit/sampler.hpp"
#include "support.hpp"

using namespace chaoskit;

namespace {
KmerDistribution empirical(const std::string& s, int k) {
    return empirical_distribution(count_kmers(DnaSequence::from_string(s), k));
}
std::uint64_t idx(const char* w) { return kmer_index(Kmer::from_string(w)); }
}  // namespace

TEST_CASE("distribution validation") {
    CHECK_THROWS_AS(KmerDistribution(2, std::vector<double>(15, 1.0 / 15)), ValidationError);
    std::vector<double> bad(16, 1.0 / 16);
    bad[0] = -1e-3;
    bad[1] += 1e-3;
    CHECK_THROWS_AS(KmerDistribution(2, bad), ValidationError);
    CHECK_THROWS_AS(KmerDistribution(2, std::vector<double>(16, 0.1)), ValidationError);
    CHECK(KmerDistribution::uniform(3).size() == 64);
    CHECK(KmerDistribution::point_mass(Kmer::from_string("GT"))[idx("GT")] == 1.0);
}

TEST_CASE("empirical distributions") {
    const auto e = empirical("ACGT", 2);
    CHECK(e[idx("AC")] == doctest::Approx(1.0 / 3));
    CHECK(e[idx("CG")] == doctest::Approx(1.0 / 3));
    CHECK(e[idx("GT")] == doctest::Approx(1.0 / 3));
    CHECK(e[idx("AA")] == 0.0);
    CHECK(empirical("AAAA", 2)[idx("AA")] == 1.0);
    KmerFrequencyVector flat{2, std::vector<std::uint64_t>(16, 5)};
    CHECK(empirical_distribution(flat)[7] == 1.0 / 16);
    CHECK_THROWS_AS(empirical_distribution({2, std::vector<std::uint64_t>(16, 0)}), ValidationError);
}

TEST_CASE("marginal residuals") {
    const auto r = marginal_residual(empirical("AC", 2));
    CHECK(r[0] == 1.0);
    CHECK(r[1] == -1.0);
    CHECK(r[2] == 0.0);
    CHECK(r[3] == 0.0);
    CHECK(max_abs(marginal_residual(KmerDistribution::uniform(3))) == 0.0);
    // A sequence whose first (k-1)-mer equals its last is balanced.
    CHECK(is_marginal_consistent(empirical("ACGTTGCAACGTA", 2)));
    CHECK(is_marginal_consistent(empirical("ACGGTACCAGTTAC", 3)));
    CHECK_THROWS_AS(marginal_residual(KmerDistribution::uniform(1)), RangeError);

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 4);
        const std::string s = oracle::random_dna(rng, static_cast<std::size_t>(k) + 5 + rng() % 400);
        const double bound = 2.0 / static_cast<double>(s.size() - static_cast<std::size_t>(k) + 1);
        CHECK(max_abs(marginal_residual(empirical(s, k))) <= bound + 1e-15);
    }
}

TEST_CASE("L1 distance") {
    const auto u = KmerDistribution::uniform(2);
    CHECK(total_variation_l1(u, u) == 0.0);
    CHECK(total_variation_l1(KmerDistribution::point_mass(Kmer::from_string("AA")),
                             KmerDistribution::point_mass(Kmer::from_string("TT"))) == 2.0);
    CHECK(total_variation_l1(empirical("ACGT", 2), u) == doctest::Approx(1.625));
    CHECK_THROWS_AS(total_variation_l1(u, KmerDistribution::uniform(3)), ValidationError);
}

TEST_CASE("CSV round trip and validation") {
    const auto theta = empirical("ATCGTATCCA", 3);
    std::stringstream ss;
    write_distribution_csv(ss, theta);
    const auto back = read_distribution_csv(ss);
    CHECK_FALSE(back.renormalized);
    CHECK(back.distribution.theta() == theta.theta());

    std::istringstream sparse("kmer,theta\nTT,0.25\nAA,0.75\n");
    const auto p = read_distribution_csv(sparse);
    CHECK(p.distribution.order() == 2);
    CHECK(p.distribution[15] == 0.25);

    std::istringstream near("kmer,theta\nA,0.5\nC,0.5000001\n");
    CHECK(read_distribution_csv(near).renormalized);

    for (const char* text : {"kmer,count\nA,1\n", "kmer,theta\nA,0.5\nA,0.5\n", "kmer,theta\nA,-1\nC,2\n",
                             "kmer,theta\nA,0.5\nCC,0.5\n", "kmer,theta\nA,0.4\n", "kmer,theta\n", "kmer,theta\nA,x\n",
                             "kmer,theta\nN,1\n"}) {
        std::istringstream in(text);
        CAPTURE(text);
        CHECK_THROWS_AS(read_distribution_csv(in), ValidationError);
    }
    CHECK_THROWS_AS(read_distribution_file("/nonexistent.csv"), IoError);

    std::ostringstream counts;
    write_counts_csv(counts, count_kmers(DnaSequence::from_string("AAC"), 1));
    CHECK(counts.str() == "kmer,count\nA,2\nC,1\nG,0\nT,0\n");
}

TEST_CASE("normalised weights") {
    const auto w = normalize_weights(1, {1, 1, 2, 0});
    CHECK(w.theta() == std::vector<double>{0.25, 0.25, 0.5, 0.0});
    CHECK_THROWS_AS(normalize_weights(1, {0, 0, 0, 0}), ValidationError);
    CHECK_THROWS_AS(normalize_weights(1, {1, -1, 1, 1}), ValidationError);
}

TEST_CASE("constraint systems") {
    const auto sys = build_constraints(2);
    REQUIRE(sys.B.rows() == 5);
    REQUIRE(sys.B.cols() == 16);
    const auto row_a = sys.B.row(1);
    CHECK(row_a(idx("AA")) == 0.0);
    for (const char* w : {"AC", "AG", "AT"}) CHECK(row_a(idx(w)) == 1.0);
    for (const char* w : {"CA", "GA", "TA"}) CHECK(row_a(idx(w)) == -1.0);
    CHECK(row_a(idx("CG")) == 0.0);
    for (int k = 2; k <= 5; ++k) {
        const auto s = build_constraints(k);
        CAPTURE(k);
        // Marginal rows sum to zero exactly.
        CHECK(s.B.bottomRows(s.B.rows() - 1).colwise().sum().cwiseAbs().maxCoeff() == 0.0);
        CHECK(s.numerical_rank == static_cast<int>(kmer_space(k - 1)));
        CHECK(s.kernel_dimension() == static_cast<int>(kmer_space(k) - kmer_space(k - 1)));
        CHECK((s.B * s.kernel_basis).cwiseAbs().maxCoeff() <= 1e-10);
        const Eigen::MatrixXd gram = s.kernel_basis.transpose() * s.kernel_basis;
        CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <= 1e-10);
    }
    CHECK_THROWS_AS(build_constraints(1), RangeError);
    CHECK_THROWS_AS(build_constraints(7), RangeError);
    CHECK(shared_constraints(3).get() == shared_constraints(3).get());
}

TEST_CASE("hit-and-run sampling") {
    const auto sys = shared_constraints(2);
    const auto one = hit_and_run_sample(2, 1, 5);
    CHECK(constraint_residual(*sys, one.theta()) <= 1e-9);
    for (double v : one.theta()) CHECK(v >= 0.0);

    const auto a = hit_and_run_sample(2, 10000, 7), b = hit_and_run_sample(2, 10000, 7);
    CHECK(a.theta() == b.theta());
    CHECK(max_abs(marginal_residual(a)) <= 1e-9);
    CHECK(hit_and_run_sample(2, 100, 8).theta() != hit_and_run_sample(2, 100, 9).theta());
    CHECK_THROWS_AS(hit_and_run_sample(2, 0, 1), ValidationError);

    // Every iterate stays on the affine subspace and inside the orthant.
    HitAndRunChain chain(shared_constraints(3), 123);
    for (int step = 0; step < 2000; ++step) {
        chain.step();
        REQUIRE(constraint_residual(*chain.system(), chain.state()) <= 1e-9);
        for (double v : chain.state()) REQUIRE(v >= -1e-12);
    }
    CHECK(chain.steps_taken() == 2000);

    // Chains advanced together give the same bits as separate runs.
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6};
    const auto together = hit_and_run_samples(3, 300, seeds);
    for (std::size_t c = 0; c < seeds.size(); ++c) CHECK(together[c].theta() == hit_and_run_sample(3, 300, seeds[c]).theta());
    CHECK(default_iterations(2) == 12000);
}
