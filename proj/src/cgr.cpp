#include "chaoskit/cgr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "chaoskit/errors.hpp"

namespace chaoskit {

namespace {

constexpr int kMaxDyadicExponent = 126;

Dyadic::Numerator shift_left(Dyadic::Numerator v, int by) {
    // Multiplication keeps the sign semantics defined for negative values.
    Dyadic::Numerator scale = 1;
    scale <<= by;
    return v * scale;
}

// Bit l-1 of the row index is set when letter l has y = -1 (A or T); bit l-1 of
// the column index when letter l has x = +1 (G or T).
constexpr unsigned kRowBit[4] = {1, 0, 0, 1};
constexpr unsigned kColBit[4] = {0, 0, 1, 1};

void check_dense_order(int k) {
    if (k < 1 || k > kMaxDenseOrder)
        throw RangeError("FCGR order must be in [1, " + std::to_string(kMaxDenseOrder) + "]");
}

void check_window(const DnaSequence& s, int k) {
    if (s.size() < static_cast<std::size_t>(k))
        throw EmptyWindowError("sequence of length " + std::to_string(s.size()) + " is shorter than k=" +
                               std::to_string(k));
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

Dyadic::Dyadic(Numerator num, int exp) : num_(num), exp_(exp) {
    if (exp_ < 0) throw RangeError("negative dyadic exponent");
    while (exp_ > 0 && (num_ & 1) == 0) {
        num_ /= 2;
        --exp_;
    }
    if (num_ == 0) exp_ = 0;
    if (exp_ > kMaxDyadicExponent) throw RangeError("dyadic exponent exceeds representable depth");
}

double Dyadic::to_double() const {
    return std::ldexp(static_cast<double>(num_), -exp_);
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    const int e = std::max(a.exp_, b.exp_);
    return Dyadic(shift_left(a.num_, e - a.exp_) + shift_left(b.num_, e - b.exp_), e);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    const int e = std::max(a.exp_, b.exp_);
    const auto lhs = shift_left(a.num_, e - a.exp_);
    const auto rhs = shift_left(b.num_, e - b.exp_);
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Corner label(Nucleotide a) {
    switch (a) {
        case Nucleotide::A: return {-1, -1};
        case Nucleotide::C: return {-1, 1};
        case Nucleotide::G: return {1, 1};
        case Nucleotide::T: return {1, -1};
    }
    return {0, 0};
}

Nucleotide label_inverse(Corner c) {
    if (c == Corner{-1, -1}) return Nucleotide::A;
    if (c == Corner{-1, 1}) return Nucleotide::C;
    if (c == Corner{1, 1}) return Nucleotide::G;
    if (c == Corner{1, -1}) return Nucleotide::T;
    throw ValidationError("not a corner of the CGR square");
}

CgrTrajectory cgr_trajectory(const DnaSequence& s, int depth_cap) {
    if (depth_cap < 0 || depth_cap > kMaxDepthCap) throw RangeError("depth cap out of range");
    CgrTrajectory t;
    t.source_length = s.size();
    t.depth_cap = depth_cap;
    t.points.reserve(s.size() + 1);
    t.points.push_back(CgrPoint::from_exact(Dyadic{}, Dyadic{}));

    // Running numerators over the common denominator 2^i.
    Dyadic::Numerator xs = 0, ys = 0;
    double fx = 0.0, fy = 0.0;
    for (std::size_t i = 1; i <= s.size(); ++i) {
        const Corner c = label(s[i - 1]);
        fx = (fx + c.x) / 2.0;
        fy = (fy + c.y) / 2.0;
        if (i <= static_cast<std::size_t>(depth_cap)) {
            const auto step = shift_left(1, static_cast<int>(i) - 1);
            xs += c.x * step;
            ys += c.y * step;
            const Dyadic x(xs, static_cast<int>(i)), y(ys, static_cast<int>(i));
            t.points.push_back({x, y, x.to_double(), y.to_double(), true});
        } else {
            t.points.push_back({Dyadic{}, Dyadic{}, fx, fy, false});
        }
    }
    return t;
}

CgrPoint last_point(const DnaSequence& s, int depth_cap) {
    if (s.empty()) throw EmptyWindowError("the empty sequence has no last CGR point");
    if (depth_cap < 0 || depth_cap > kMaxDepthCap) throw RangeError("depth cap out of range");
    const std::size_t n = s.size();
    if (n <= static_cast<std::size_t>(depth_cap)) {
        // x_w = sum_l x_l 2^(l-1) / 2^n
        Dyadic::Numerator xs = 0, ys = 0;
        for (std::size_t l = 1; l <= n; ++l) {
            const Corner c = label(s[l - 1]);
            const auto w = shift_left(1, static_cast<int>(l) - 1);
            xs += c.x * w;
            ys += c.y * w;
        }
        return CgrPoint::from_exact(Dyadic(xs, static_cast<int>(n)), Dyadic(ys, static_cast<int>(n)));
    }
    // Letter l contributes x_l / 2^(n-l+1); anything older than ~1100 letters
    // underflows, so only the tail is summed, smallest terms first.
    const std::size_t tail = std::min<std::size_t>(n, 1100);
    double fx = 0.0, fy = 0.0;
    for (std::size_t back = tail; back >= 1; --back) {
        const Corner c = label(s[n - back]);
        fx += std::ldexp(static_cast<double>(c.x), -static_cast<int>(back));
        fy += std::ldexp(static_cast<double>(c.y), -static_cast<int>(back));
    }
    return {Dyadic{}, Dyadic{}, fx, fy, false};
}

CgrPoint cell_center(int k, std::uint64_t i, std::uint64_t j) {
    if (k < 1 || k > kMaxCellOrder) throw RangeError("cell order out of range");
    const std::uint64_t side = std::uint64_t{1} << k;
    if (i >= side || j >= side) throw RangeError("cell index out of range");
    // (-(2^k-1) + 2j) / 2^k and ((2^k-1) - 2i) / 2^k
    const auto top = static_cast<Dyadic::Numerator>(side - 1);
    const Dyadic x(-top + 2 * static_cast<Dyadic::Numerator>(j), k);
    const Dyadic y(top - 2 * static_cast<Dyadic::Numerator>(i), k);
    return CgrPoint::from_exact(x, y);
}

CellIndices kmer_cell_indices(const Kmer& w) {
    const int k = w.size();
    if (k > kMaxCellOrder) throw RangeError("k-mer too long for cell indexing");
    // j = (2^k - 1 + sum x_l 2^(l-1)) / 2,  i = (2^k - 1 - sum y_l 2^(l-1)) / 2
    std::int64_t sx = 0, sy = 0;
    for (int l = 1; l <= k; ++l) {
        const Corner c = label(w.at(l - 1));
        sx += c.x * (std::int64_t{1} << (l - 1));
        sy += c.y * (std::int64_t{1} << (l - 1));
    }
    const std::int64_t top = (std::int64_t{1} << k) - 1;
    return {k, static_cast<std::uint64_t>((top - sy) / 2), static_cast<std::uint64_t>((top + sx) / 2)};
}

Kmer cell_indices_to_kmer(const CellIndices& c) {
    if (c.k < 1 || c.k > kMaxCellOrder) throw RangeError("cell order out of range");
    const std::uint64_t side = std::uint64_t{1} << c.k;
    if (c.i >= side || c.j >= side) throw RangeError("cell index out of range");
    std::uint64_t packed = 0;
    for (int l = 1; l <= c.k; ++l) {
        const int alpha = static_cast<int>((c.i >> (l - 1)) & 1u);
        const int beta = static_cast<int>((c.j >> (l - 1)) & 1u);
        const Nucleotide a = label_inverse({2 * beta - 1, 1 - 2 * alpha});
        packed = (packed << 2) | code(a);
    }
    return Kmer(packed, c.k);
}

CellBox kmer_cell_box(const Kmer& w) {
    const CgrPoint center = last_point(w.to_sequence(), kMaxDepthCap);
    const Dyadic half(1, w.size());
    return {center.x - half, center.x + half, center.y - half, center.y + half};
}

// ---------------------------------------------------------------------------

FcgrMatrix::FcgrMatrix(int k) : k_(k) {
    check_dense_order(k);
    entries_.assign(dim() * dim(), 0);
}

std::uint64_t FcgrMatrix::total() const {
    std::uint64_t sum = 0;
    for (auto v : entries_) sum += v;
    return sum;
}

std::uint64_t FcgrMatrix::max_entry() const {
    return entries_.empty() ? 0 : *std::max_element(entries_.begin(), entries_.end());
}

FcgrMatrix& FcgrMatrix::operator+=(const FcgrMatrix& other) {
    if (other.k_ != k_) throw ValidationError("cannot add FCGR matrices of different order");
    for (std::size_t n = 0; n < entries_.size(); ++n) entries_[n] += other.entries_[n];
    return *this;
}

FcgrMode parse_fcgr_mode(std::string_view name) {
    if (name == "count") return FcgrMode::Count;
    if (name == "grid") return FcgrMode::Grid;
    if (name == "kronecker") return FcgrMode::Kronecker;
    throw ValidationError("unknown FCGR mode '" + std::string(name) + "' (count|grid|kronecker)");
}

FcgrMatrix fcgr_grid(const DnaSequence& s, int k) {
    check_dense_order(k);
    check_window(s, k);
    FcgrMatrix out(k);
    // The cell of p_m depends only on the last k letters: a new letter enters
    // as the most significant bit of both indices and the oldest falls off.
    std::uint64_t row = 0, col = 0;
    const auto letters = s.letters();
    for (std::size_t m = 1; m <= letters.size(); ++m) {
        const unsigned c = code(letters[m - 1]);
        row = (row >> 1) | (std::uint64_t{kRowBit[c]} << (k - 1));
        col = (col >> 1) | (std::uint64_t{kColBit[c]} << (k - 1));
        if (m >= static_cast<std::size_t>(k)) ++out.at(row, col);
    }
    return out;
}

FcgrMatrix fcgr_from_counts(const KmerFrequencyVector& counts) {
    FcgrMatrix out(counts.k);
    for (std::uint64_t tau = 0; tau < counts.counts.size(); ++tau) {
        if (counts.counts[tau] == 0) continue;
        const CellIndices c = kmer_cell_indices(Kmer(tau, counts.k));
        out.at(c.i, c.j) = counts.counts[tau];
    }
    return out;
}

FcgrMatrix fcgr_count(const DnaSequence& s, int k) {
    check_dense_order(k);
    check_window(s, k);
    return fcgr_from_counts(count_kmers(s, k));
}

FcgrMatrix fcgr_kronecker(const DnaSequence& s, int k) {
    check_dense_order(k);
    check_window(s, k);
    const KmerFrequencyVector counts = count_kmers(s, k);
    FcgrMatrix out(k);
    // Letter t of M^(k)_(i,j) is M[bit (k-t) of i][bit (k-t) of j]; M puts
    // C,G on the top row and A,T on the bottom, so the per-letter bits match
    // the grid layout but the first letter is the most significant.
    for (std::uint64_t tau = 0; tau < counts.counts.size(); ++tau) {
        if (counts.counts[tau] == 0) continue;
        std::uint64_t row = 0, col = 0;
        for (int t = 0; t < k; ++t) {
            const unsigned c = static_cast<unsigned>(tau >> (2 * (k - 1 - t))) & 3u;
            row = (row << 1) | kRowBit[c];
            col = (col << 1) | kColBit[c];
        }
        out.at(row, col) = counts.counts[tau];
    }
    return out;
}

FcgrMatrix fcgr(const DnaSequence& s, int k, FcgrMode mode) {
    switch (mode) {
        case FcgrMode::Count: return fcgr_count(s, k);
        case FcgrMode::Grid: return fcgr_grid(s, k);
        case FcgrMode::Kronecker: return fcgr_kronecker(s, k);
    }
    throw ValidationError("unknown FCGR mode");
}

KmerFrequencyVector fcgr_to_frequency_vector(const FcgrMatrix& f) {
    const int k = f.order();
    KmerFrequencyVector out{k, std::vector<std::uint64_t>(kmer_space(k), 0)};
    for (std::uint64_t i = 0; i < f.dim(); ++i)
        for (std::uint64_t j = 0; j < f.dim(); ++j)
            out.counts[kmer_index(cell_indices_to_kmer({k, i, j}))] = f.at(i, j);
    return out;
}

void write_fcgr_csv(std::ostream& out, const FcgrMatrix& f) {
    out << "k=" << f.order() << '\n';
    for (std::size_t i = 0; i < f.dim(); ++i) {
        for (std::size_t j = 0; j < f.dim(); ++j) {
            if (j) out << ',';
            out << f.at(i, j);
        }
        out << '\n';
    }
    if (!out) throw IoError("write failure while emitting FCGR CSV");
}

void write_trajectory_tsv(std::ostream& out, const CgrTrajectory& t) {
    out << "index\tx\ty\n";
    for (std::size_t n = 0; n < t.points.size(); ++n)
        out << n << '\t' << format_double(t.points[n].fx) << '\t' << format_double(t.points[n].fy) << '\n';
    if (!out) throw IoError("write failure while emitting trajectory");
}

}  // namespace chaoskit
