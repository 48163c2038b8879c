#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "chaoskit/distribution.hpp"
#include "chaoskit/sequence.hpp"

namespace chaoskit {

// Directed multigraph on (k-1)-mers: the k-mer w is an edge prefix(w) ->
// suffix(w) with multiplicity edge_counts[kmer_index(w)]. Vertices are
// implicit; only those with incident edges take part in connectivity.
class DeBruijnMultigraph {
public:
    DeBruijnMultigraph(int k, std::vector<std::uint64_t> edge_counts);
    static DeBruijnMultigraph from_counts(const KmerFrequencyVector& counts);

    int order() const { return k_; }
    std::uint64_t vertex_space() const { return kmer_space(k_ - 1); }
    const std::vector<std::uint64_t>& edge_counts() const { return counts_; }
    std::uint64_t multiplicity(const Kmer& w) const { return counts_[kmer_index(w)]; }
    std::uint64_t total_edges() const;

    std::uint64_t prefix(std::uint64_t edge) const { return edge >> 2; }
    std::uint64_t suffix(std::uint64_t edge) const { return edge & (vertex_space() - 1); }
    bool has_edges(std::uint64_t vertex) const;

    // Increments every edge on the (k-1)-edge path spelled by the word `from`
    // followed by `to` (both (k-1)-mer codes), `times` times.
    void add_spelled_path(std::uint64_t from, std::uint64_t to, std::uint64_t times = 1);

    // Out-degree minus in-degree for every vertex code (dense).
    std::vector<std::int64_t> imbalance() const;
    // Strongly connected components over vertices with incident edges; each
    // inner vector is sorted, and components are ordered by their smallest vertex.
    std::vector<std::vector<std::uint64_t>> strongly_connected_components() const;

    friend bool operator==(const DeBruijnMultigraph&, const DeBruijnMultigraph&) = default;

private:
    int k_;
    std::vector<std::uint64_t> counts_;
};

// c_w = round((n - k + 1) * theta_w), halves away from zero. Throws
// ValidationError when n <= k.
std::vector<std::uint64_t> counts_from_distribution(const KmerDistribution& theta, std::uint64_t n);

// delta(v) for every vertex with incident edges (zeros included).
std::map<Kmer, std::int64_t> flow_imbalance(const DeBruijnMultigraph& g);

struct RepairResult {
    DeBruijnMultigraph graph;
    std::uint64_t artificial_edges;
};

// Pairs surplus vertices v with deficit vertices w in lexicographic order and
// routes min(delta(v), -delta(w)) units along the path spelled by wv.
RepairResult balance(const DeBruijnMultigraph& g);
// Links the smallest vertex of each strongly connected component, in
// lexicographic order, into one cycle of spelled paths. Expects a balanced graph.
RepairResult connect(const DeBruijnMultigraph& g);

struct EulerianWalk {
    std::uint64_t start;              // (k-1)-mer code
    std::uint64_t end;                // (k-1)-mer code
    std::vector<std::uint64_t> edges;  // k-mer codes in traversal order
};

// Hierholzer traversal taking the smallest available k-mer at every vertex.
// Balanced graphs give a cycle from the smallest vertex with edges; a single
// +1/-1 pair gives a path from the +1 vertex. Throws NotEulerianError otherwise
// or when the edges do not form one connected walk.
EulerianWalk eulerian_path(const DeBruijnMultigraph& g);

// Start vertex followed by the last letter of every edge.
DnaSequence spell_walk(int k, const EulerianWalk& walk);

struct ReconstructionReport {
    int k = 0;
    std::uint64_t target_length = 0;
    std::uint64_t sequence_length = 0;
    std::uint64_t edge_count = 0;  // |E| after rounding, before repairs
    std::uint64_t n_artificial_balance = 0;
    std::uint64_t n_artificial_connect = 0;
    double achieved_l1 = 0.0;   // against the input distribution
    double rounding_l1 = 0.0;   // || c/|E| - theta ||_1
    double count_l1 = 0.0;      // against the rounded counts c/|E|
    double artificial_bound_l1 = 0.0;  // 2 n_art / (|E| + n_art)
    double bound_l1 = 0.0;      // artificial_bound_l1 + rounding_l1
    std::string path_start;
    std::string path_end;
    bool used_direct_eulerian_path = false;

    std::uint64_t n_artificial() const { return n_artificial_balance + n_artificial_connect; }
};

struct Reconstruction {
    DnaSequence sequence;
    ReconstructionReport report;
    std::vector<std::uint64_t> rounded_counts;
    DeBruijnMultigraph final_graph;
};

// Throws RangeError unless 2 <= k <= 6, ValidationError when n <= k or all
// rounded counts vanish.
Reconstruction reconstruct(const KmerDistribution& theta, std::uint64_t n);

// 2 n_art / ((n - k + 1) + n_art).
double error_bound(int k, std::uint64_t n, std::uint64_t n_artificial);
// Same with the worst case n_art = (k - 1) 4^k.
double error_bound(int k, std::uint64_t n);
// Smallest n with 2 (k-1) 4^k / (n - k + 1) <= eps, the length that makes the
// worst-case bound drop below eps.
std::uint64_t guaranteed_min_length(int k, double eps);
// 2 * 4^k / eps + k - 1, shorter than the worst case; sampled distributions
// reach eps at this length in practice.
std::uint64_t nominal_min_length(int k, double eps);

std::string report_to_json(const ReconstructionReport& report, int indent = 2);
std::string fasta_header(const ReconstructionReport& report);

}  // namespace chaoskit
