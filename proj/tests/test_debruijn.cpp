#include <doctest.h>

#include <random>

#include "chaoskit/debruijn.hpp"
#include "chaoskit/errors.hpp"
#include "chaoskit/sampler.hpp"
#include "support.hpp"

using namespace chaoskit;

namespace {

std::uint64_t idx(const char* w) { return kmer_index(Kmer::from_string(w)); }

DeBruijnMultigraph graph_of(const std::string& s, int k) {
    return DeBruijnMultigraph::from_counts(count_kmers(DnaSequence::from_string(s), k));
}

DeBruijnMultigraph graph_with(int k, std::initializer_list<std::pair<const char*, std::uint64_t>> edges) {
    std::vector<std::uint64_t> counts(kmer_space(k), 0);
    for (auto [w, c] : edges) counts[idx(w)] = c;
    return DeBruijnMultigraph(k, counts);
}

std::int64_t delta_of(const DeBruijnMultigraph& g, const char* v) {
    const auto m = flow_imbalance(g);
    const auto it = m.find(Kmer::from_string(v));
    return it == m.end() ? 0 : it->second;
}

}  // namespace

TEST_CASE("rounded counts") {
    const auto u = counts_from_distribution(KmerDistribution::uniform(2), 17);
    CHECK(u == std::vector<std::uint64_t>(16, 1));
    const auto p = counts_from_distribution(KmerDistribution::point_mass(Kmer::from_string("AA")), 101);
    CHECK(p[0] == 100);
    std::vector<double> theta(16, 0.0);
    theta[idx("AC")] = 0.5 + 1.0 / 32;
    theta[idx("CA")] = 0.5 - 1.0 / 32;
    const auto halves = counts_from_distribution(KmerDistribution(2, theta), 17);
    CHECK(halves[idx("AC")] == 9);
    CHECK(halves[idx("CA")] == 8);
    CHECK_THROWS_AS(counts_from_distribution(KmerDistribution::uniform(2), 2), ValidationError);
}

TEST_CASE("flow imbalance") {
    const auto g = graph_of("ATCGTATCCA", 3);
    CHECK(delta_of(g, "AT") == 1);
    CHECK(delta_of(g, "CA") == -1);
    const auto m = flow_imbalance(g);
    std::int64_t sum = 0;
    for (const auto& [v, d] : m) {
        sum += d;
        if (v.str() != "AT" && v.str() != "CA") CHECK(d == 0);
    }
    CHECK(sum == 0);
    CHECK(flow_imbalance(DeBruijnMultigraph(2, std::vector<std::uint64_t>(16, 0))).empty());
    for (auto d : graph_of("ACGGTACCAGTTAC", 3).imbalance()) CHECK(d == 0);
    CHECK_THROWS_AS(DeBruijnMultigraph(1, std::vector<std::uint64_t>(4, 0)), RangeError);
    CHECK_THROWS_AS(DeBruijnMultigraph(2, std::vector<std::uint64_t>(15, 0)), ValidationError);
    CHECK(g.multiplicity(Kmer::from_string("ATC")) == 2);
    CHECK(g.total_edges() == 8);
}

TEST_CASE("balancing") {
    const auto g = graph_of("ATCGTATCCA", 3);
    const auto b = balance(g);
    // delta(AT) = +1, delta(CA) = -1: one unit along CA -> AA -> AT.
    CHECK(b.artificial_edges == 2);
    CHECK(b.graph.multiplicity(Kmer::from_string("CAA")) == 1);
    CHECK(b.graph.multiplicity(Kmer::from_string("AAT")) == 1);
    CHECK(b.graph.multiplicity(Kmer::from_string("ATC")) == 2);
    for (auto d : b.graph.imbalance()) CHECK(d == 0);

    const auto balanced = graph_of("ACGTTGCAACGTA", 2);
    const auto same = balance(balanced);
    CHECK(same.artificial_edges == 0);
    CHECK(same.graph == balanced);

    // delta(A) = +2, delta(T) = -2 at k = 2.
    const auto g2 = graph_with(2, {{"AC", 2}, {"CT", 2}});
    CHECK(g2.imbalance()[0] == 2);
    CHECK(g2.imbalance()[3] == -2);
    const auto b2 = balance(g2);
    CHECK(b2.artificial_edges == 2);
    CHECK(b2.graph.multiplicity(Kmer::from_string("TA")) == 2);
    for (auto d : b2.graph.imbalance()) CHECK(d == 0);
}

TEST_CASE("connecting components") {
    const auto loops = graph_with(2, {{"AA", 3}, {"CC", 2}});
    CHECK(loops.strongly_connected_components().size() == 2);
    const auto c = connect(loops);
    CHECK(c.artificial_edges == 2);
    CHECK(c.graph.multiplicity(Kmer::from_string("AC")) == 1);
    CHECK(c.graph.multiplicity(Kmer::from_string("CA")) == 1);
    for (auto d : c.graph.imbalance()) CHECK(d == 0);
    CHECK(c.graph.strongly_connected_components().size() == 1);

    const auto single = graph_of("ACGGTACCAGTTAC", 3);
    CHECK(connect(single).artificial_edges == 0);

    // k = 3: each link between disjoint components spells two edges.
    const auto three = graph_with(3, {{"AAA", 1}, {"CCC", 1}, {"GGG", 1}});
    const auto c3 = connect(three);
    CHECK(c3.artificial_edges == 6);
    CHECK(c3.graph.multiplicity(Kmer::from_string("AAC")) == 1);
    CHECK(c3.graph.multiplicity(Kmer::from_string("ACC")) == 1);
    CHECK(c3.graph.multiplicity(Kmer::from_string("GGA")) == 1);
    CHECK(c3.graph.strongly_connected_components().size() == 1);
}

TEST_CASE("Eulerian walks") {
    const auto g = graph_of("ATCGTATCCA", 3);
    const auto walk = eulerian_path(g);
    const auto spelled = spell_walk(3, walk);
    CHECK(count_kmers(spelled, 3) == count_kmers(DnaSequence::from_string("ATCGTATCCA"), 3));
    CHECK(spelled.str().substr(0, 2) == "AT");

    const auto loop = eulerian_path(graph_with(2, {{"AA", 1}}));
    CHECK(spell_walk(2, loop).str() == "AA");

    const auto cycle = eulerian_path(graph_with(2, {{"AC", 2}, {"CA", 2}}));
    CHECK(cycle.edges.size() == 4);
    CHECK(spell_walk(2, cycle).str() == "ACACA");

    // Smallest next k-mer first.
    CHECK(spell_walk(2, eulerian_path(graph_with(2, {{"AA", 1}, {"AC", 1}, {"CA", 1}}))).str() == "AACA");

    CHECK_THROWS_AS(eulerian_path(graph_with(2, {{"AA", 1}, {"CC", 1}})), NotEulerianError);
    CHECK_THROWS_AS(eulerian_path(graph_with(2, {{"AC", 2}})), NotEulerianError);
    CHECK_THROWS_AS(eulerian_path(DeBruijnMultigraph(2, std::vector<std::uint64_t>(16, 0))), NotEulerianError);
}

TEST_CASE("reconstruction from realisable counts") {
    const auto theta = empirical_distribution(count_kmers(DnaSequence::from_string("ATCGTATCCA"), 3));
    const auto rec = reconstruct(theta, 10);
    CHECK(rec.sequence.size() == 10);
    CHECK(rec.report.achieved_l1 == 0.0);
    CHECK(rec.report.used_direct_eulerian_path);
    CHECK(rec.report.path_start == "AT");
    CHECK(rec.report.path_end == "CA");
    CHECK(count_kmers(rec.sequence, 3) == count_kmers(DnaSequence::from_string("ATCGTATCCA"), 3));

    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 5);
        const std::string s = oracle::random_dna(rng, 50 + rng() % 3000);
        const auto counts = count_kmers(DnaSequence::from_string(s), k);
        const auto r = reconstruct(empirical_distribution(counts), s.size());
        // Either the exact multiset comes back, or repairs stay within the bound.
        if (r.report.n_artificial() == 0) {
            CHECK(count_kmers(r.sequence, k) == counts);
            CHECK(r.report.achieved_l1 == 0.0);
        } else {
            CHECK(r.report.achieved_l1 <= r.report.bound_l1 + 1e-12);
        }
        CHECK(count_kmers(r.sequence, k).counts == r.final_graph.edge_counts());
    }
}

TEST_CASE("reconstruction with repairs") {
    const auto u = reconstruct(KmerDistribution::uniform(2), 3201);
    CHECK(u.report.achieved_l1 <= 0.01);
    CHECK(u.sequence.size() == 1 + u.report.edge_count + u.report.n_artificial());

    const auto aa = reconstruct(KmerDistribution::point_mass(Kmer::from_string("AA")), 101);
    CHECK(aa.sequence.str() == std::string(101, 'A'));
    CHECK(aa.report.n_artificial() == 0);

    std::vector<double> two(16, 0.0);
    two[idx("AA")] = 0.5;
    two[idx("CC")] = 0.5;
    const auto split = reconstruct(KmerDistribution(2, two), 101);
    CHECK(split.report.n_artificial_connect == 2);
    CHECK(split.report.achieved_l1 <= split.report.bound_l1 + 1e-12);
    CHECK(split.report.count_l1 <= split.report.artificial_bound_l1 + 1e-12);

    // Same input, same output.
    const auto theta = hit_and_run_sample(3, 500, 42);
    const auto r1 = reconstruct(theta, 20000), r2 = reconstruct(theta, 20000);
    CHECK(r1.sequence == r2.sequence);
    CHECK(r1.report.n_artificial_balance <= 2 * kmer_space(3));
    CHECK(r1.report.n_artificial_connect <= kmer_space(2));
    CHECK(count_kmers(r1.sequence, 3).counts == r1.final_graph.edge_counts());
    CHECK(r1.report.count_l1 <= r1.report.artificial_bound_l1 + 1e-12);

    CHECK_THROWS_AS(reconstruct(KmerDistribution::uniform(1), 100), RangeError);
    CHECK_THROWS_AS(reconstruct(KmerDistribution::uniform(7), 100), RangeError);
    CHECK_THROWS_AS(reconstruct(KmerDistribution::uniform(2), 2), ValidationError);
    CHECK_THROWS_AS(reconstruct(KmerDistribution::uniform(3), 10), ValidationError);
}

TEST_CASE("error bounds and lengths") {
    CHECK(error_bound(2, 3201, 0) == 0.0);
    CHECK(error_bound(2, 3201) == doctest::Approx(32.0 / 3216.0));
    CHECK(error_bound(2, 3201) < 0.01);
    CHECK(error_bound(3, 10000, 50) > error_bound(3, 20000, 50));
    CHECK(nominal_min_length(2, 0.01) == 3201);
    CHECK(nominal_min_length(6, 0.01) == 819205);
    CHECK(guaranteed_min_length(2, 0.01) == 3202);
    CHECK(error_bound(2, guaranteed_min_length(2, 0.01)) < 0.01);
    CHECK(error_bound(6, guaranteed_min_length(6, 0.01)) < 0.01);
    CHECK_THROWS_AS(error_bound(3, 3, 1), ValidationError);
}

TEST_CASE("report serialisation") {
    const auto theta = empirical_distribution(count_kmers(DnaSequence::from_string("ATCGTATCCA"), 3));
    const auto rec = reconstruct(theta, 10);
    const std::string json = report_to_json(rec.report);
    CHECK(json.find("\"achieved_l1\": 0.0") != std::string::npos);
    CHECK(json.find("\"used_direct_eulerian_path\": true") != std::string::npos);
    CHECK(json.find("\"n_artificial_balance\": 0") != std::string::npos);
    CHECK(json.find("\"path_start\": \"AT\"") != std::string::npos);
    CHECK(fasta_header(rec.report) == "reconstructed k=3 n=10 l1=0");
}
