#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "chaoskit/sequence.hpp"

namespace chaoskit {

// Exact dyadic rational num / 2^exp, kept normalised (num odd, or exp == 0).
class Dyadic {
public:
    using Numerator = __int128;

    constexpr Dyadic() = default;
    Dyadic(Numerator num, int exp);

    static Dyadic integer(long long v) { return Dyadic(v, 0); }

    Numerator numerator() const { return num_; }
    int exponent() const { return exp_; }
    double to_double() const;

    Dyadic operator-() const { return Dyadic(-num_, exp_); }
    friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
    // Division by 2^shift.
    Dyadic scaled_down(int shift) const { return Dyadic(num_, exp_ + shift); }
    Dyadic times(int factor) const { return Dyadic(num_ * factor, exp_); }

    friend bool operator==(const Dyadic&, const Dyadic&) = default;
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

private:
    Numerator num_ = 0;
    int exp_ = 0;
};

// Corner of the CGR square, components in {-1, +1}.
struct Corner {
    int x;
    int y;
    friend bool operator==(const Corner&, const Corner&) = default;
};

Corner label(Nucleotide a);
// Throws ValidationError unless both components are +-1.
Nucleotide label_inverse(Corner c);

// A point of the CGR square. Within the dyadic depth cap the exact
// coordinates are authoritative; past it only the float shadow is kept.
struct CgrPoint {
    Dyadic x;
    Dyadic y;
    double fx = 0.0;
    double fy = 0.0;
    bool exact = true;

    static CgrPoint from_exact(Dyadic x, Dyadic y) { return {x, y, x.to_double(), y.to_double(), true}; }

    friend bool operator==(const CgrPoint& a, const CgrPoint& b) {
        if (a.exact && b.exact) return a.x == b.x && a.y == b.y;
        return a.exact == b.exact && a.fx == b.fx && a.fy == b.fy;
    }
};

inline constexpr int kDefaultDepthCap = 64;
inline constexpr int kMaxDepthCap = 120;

struct CgrTrajectory {
    std::vector<CgrPoint> points;  // p_0 .. p_n
    std::size_t source_length = 0;
    int depth_cap = kDefaultDepthCap;
};

// p_0 = (0,0), p_i = (p_{i-1} + label(a_i)) / 2. Exact for i <= depth_cap.
CgrTrajectory cgr_trajectory(const DnaSequence& s, int depth_cap = kDefaultDepthCap);

// Final trajectory point from the closed-form sums, without building the
// trajectory. Throws EmptyWindowError on the empty sequence; exact when
// |s| <= depth_cap.
CgrPoint last_point(const DnaSequence& s, int depth_cap = kDefaultDepthCap);

// (i, j) = (row, column) of an order-k grid cell; row 0 is the top edge
// (y near +1), column 0 the left edge (x near -1).
struct CellIndices {
    int k;
    std::uint64_t i;
    std::uint64_t j;
    friend bool operator==(const CellIndices&, const CellIndices&) = default;
};

inline constexpr int kMaxCellOrder = 32;

// Exact center of cell_k(i, j). Throws RangeError for indices outside [0, 2^k).
CgrPoint cell_center(int k, std::uint64_t i, std::uint64_t j);
CellIndices kmer_cell_indices(const Kmer& w);
Kmer cell_indices_to_kmer(const CellIndices& c);

// Open box around a center with half-width 1/2^half_exp.
struct CellBox {
    Dyadic x_lo, x_hi, y_lo, y_hi;
};
CellBox kmer_cell_box(const Kmer& w);

// 2^k x 2^k count matrix, row-major.
class FcgrMatrix {
public:
    FcgrMatrix() = default;
    explicit FcgrMatrix(int k);

    int order() const { return k_; }
    std::size_t dim() const { return std::size_t{1} << k_; }
    std::uint64_t& at(std::size_t i, std::size_t j) { return entries_[i * dim() + j]; }
    std::uint64_t at(std::size_t i, std::size_t j) const { return entries_[i * dim() + j]; }
    const std::vector<std::uint64_t>& entries() const { return entries_; }
    std::uint64_t total() const;
    std::uint64_t max_entry() const;

    FcgrMatrix& operator+=(const FcgrMatrix& other);
    friend bool operator==(const FcgrMatrix&, const FcgrMatrix&) = default;

private:
    int k_ = 0;
    std::vector<std::uint64_t> entries_;
};

enum class FcgrMode { Count, Grid, Kronecker };
FcgrMode parse_fcgr_mode(std::string_view name);

// Grid definition: bins every trajectory point p_m, m >= k, into its open
// order-k cell. Points p_0..p_{k-1} sit on order-k grid lines and fall in no cell.
FcgrMatrix fcgr_grid(const DnaSequence& s, int k);
// Counting definition: one k-mer pass, scattered through kmer_cell_indices.
FcgrMatrix fcgr_count(const DnaSequence& s, int k);
// Kronecker-product layout M^(k), M = [[C, G], [A, T]].
FcgrMatrix fcgr_kronecker(const DnaSequence& s, int k);
FcgrMatrix fcgr(const DnaSequence& s, int k, FcgrMode mode);

FcgrMatrix fcgr_from_counts(const KmerFrequencyVector& counts);
KmerFrequencyVector fcgr_to_frequency_vector(const FcgrMatrix& f);

// CSV: first line "k=<k>", then 2^k comma-separated rows, top row first.
void write_fcgr_csv(std::ostream& out, const FcgrMatrix& f);
// TSV with header "index\tx\ty", float shadow coordinates.
void write_trajectory_tsv(std::ostream& out, const CgrTrajectory& t);

}  // namespace chaoskit
