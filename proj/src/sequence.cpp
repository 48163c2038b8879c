#include "chaoskit/sequence.hpp"

#include <algorithm>
#include <cctype>

#include "chaoskit/errors.hpp"

namespace chaoskit {

char to_char(Nucleotide n) {
    static constexpr char kLetters[4] = {'A', 'C', 'G', 'T'};
    return kLetters[code(n)];
}

std::optional<Nucleotide> nucleotide_from_char(char c) {
    switch (c) {
        case 'A': case 'a': return Nucleotide::A;
        case 'C': case 'c': return Nucleotide::C;
        case 'G': case 'g': return Nucleotide::G;
        case 'T': case 't': return Nucleotide::T;
        default: return std::nullopt;
    }
}

DnaSequence DnaSequence::from_string(std::string_view text) {
    std::vector<Nucleotide> letters;
    letters.reserve(text.size());
    for (char c : text) {
        auto n = nucleotide_from_char(c);
        if (!n) throw ValidationError(std::string("invalid nucleotide '") + c + "'");
        letters.push_back(*n);
    }
    return DnaSequence(std::move(letters));
}

void DnaSequence::append(const DnaSequence& other) {
    letters_.insert(letters_.end(), other.letters_.begin(), other.letters_.end());
}

DnaSequence DnaSequence::substr(std::size_t pos, std::size_t len) const {
    if (pos > letters_.size()) throw RangeError("substring start past end of sequence");
    len = std::min(len, letters_.size() - pos);
    return DnaSequence(std::vector<Nucleotide>(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                                               letters_.begin() + static_cast<std::ptrdiff_t>(pos + len)));
}

std::string DnaSequence::str() const {
    std::string out(letters_.size(), 'A');
    std::transform(letters_.begin(), letters_.end(), out.begin(), to_char);
    return out;
}

// ---------------------------------------------------------------------------

Kmer::Kmer(std::uint64_t packed, int k) : packed_(packed), k_(k) {
    if (k < 1 || k > kMaxKmerLength) throw RangeError("k-mer length must be in [1, 32]");
    if (k < 32 && packed >= kmer_space(k)) throw RangeError("packed k-mer code out of range");
}

Kmer Kmer::from_string(std::string_view text) { return from_sequence(DnaSequence::from_string(text)); }

Kmer Kmer::from_sequence(const DnaSequence& s) {
    if (s.empty() || s.size() > static_cast<std::size_t>(kMaxKmerLength))
        throw RangeError("k-mer length must be in [1, 32]");
    std::uint64_t packed = 0;
    for (Nucleotide n : s.letters()) packed = (packed << 2) | code(n);
    return Kmer(packed, static_cast<int>(s.size()));
}

DnaSequence Kmer::to_sequence() const {
    DnaSequence s;
    s.reserve(static_cast<std::size_t>(k_));
    for (int t = 0; t < k_; ++t) s.push_back(at(t));
    return s;
}

std::string Kmer::str() const { return to_sequence().str(); }

std::uint64_t kmer_index(const Kmer& w) { return w.packed(); }

Kmer kmer_from_index(std::uint64_t i, int k) {
    if (k < 1 || k > kMaxKmerLength) throw RangeError("k must be in [1, 32]");
    if (k < 32 && i >= kmer_space(k))
        throw RangeError("index " + std::to_string(i) + " out of range for k=" + std::to_string(k));
    return Kmer(i, k);
}

std::uint64_t KmerFrequencyVector::total() const {
    std::uint64_t sum = 0;
    for (auto c : counts) sum += c;
    return sum;
}

KmerFrequencyVector count_kmers(const DnaSequence& s, int k) {
    if (k < 1 || k > kMaxDenseOrder)
        throw RangeError("dense k-mer counting supports k in [1, " + std::to_string(kMaxDenseOrder) + "]");
    if (s.size() < static_cast<std::size_t>(k))
        throw EmptyWindowError("sequence of length " + std::to_string(s.size()) +
                               " has no window of length " + std::to_string(k));
    KmerFrequencyVector out{k, std::vector<std::uint64_t>(kmer_space(k), 0)};
    for_each_kmer(s, k, [&](std::uint64_t c) { ++out.counts[c]; });
    return out;
}

void accumulate_kmers(const DnaSequence& s, KmerFrequencyVector& into) {
    if (into.counts.size() != kmer_space(into.k)) throw ValidationError("frequency vector has wrong size");
    for_each_kmer(s, into.k, [&](std::uint64_t c) { ++into.counts[c]; });
}

std::uint64_t occurrences(const DnaSequence& s, const Kmer& w) {
    if (s.size() < static_cast<std::size_t>(w.size()))
        throw EmptyWindowError("sequence shorter than the k-mer");
    std::uint64_t n = 0;
    const std::uint64_t target = w.packed();
    for_each_kmer(s, w.size(), [&](std::uint64_t c) { n += (c == target); });
    return n;
}

// ---------------------------------------------------------------------------

LetterPermutation::LetterPermutation() : image_(kAlphabet) {}

LetterPermutation::LetterPermutation(std::array<Nucleotide, 4> image) : image_(image) {
    unsigned seen = 0;
    for (auto n : image_) seen |= 1u << code(n);
    if (seen != 0xF) throw ValidationError("letter map is not a bijection");
}

LetterPermutation LetterPermutation::parse(std::string_view cycles) {
    std::array<Nucleotide, 4> image = kAlphabet;
    unsigned used = 0;
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < cycles.size() && (std::isspace(static_cast<unsigned char>(cycles[pos])) || cycles[pos] == ','))
            ++pos;
    };
    skip_space();
    if (pos == cycles.size()) throw ValidationError("empty permutation; use () for the identity");
    while (pos < cycles.size()) {
        if (cycles[pos] != '(') throw ValidationError("expected '(' in cycle notation");
        ++pos;
        std::vector<Nucleotide> cycle;
        for (;;) {
            skip_space();
            if (pos == cycles.size()) throw ValidationError("unterminated cycle");
            if (cycles[pos] == ')') {
                ++pos;
                break;
            }
            auto n = nucleotide_from_char(cycles[pos]);
            if (!n) throw ValidationError(std::string("invalid letter '") + cycles[pos] + "' in permutation");
            if (used & (1u << code(*n))) throw ValidationError("letter repeated in cycle notation");
            used |= 1u << code(*n);
            cycle.push_back(*n);
            ++pos;
        }
        for (std::size_t i = 0; i < cycle.size(); ++i) image[code(cycle[i])] = cycle[(i + 1) % cycle.size()];
        skip_space();
    }
    return LetterPermutation(image);
}

LetterPermutation LetterPermutation::inverse() const {
    std::array<Nucleotide, 4> inv{};
    for (auto n : kAlphabet) inv[code(image_[code(n)])] = n;
    return LetterPermutation(inv);
}

LetterPermutation LetterPermutation::then(const LetterPermutation& next) const {
    std::array<Nucleotide, 4> out{};
    for (auto n : kAlphabet) out[code(n)] = next((*this)(n));
    return LetterPermutation(out);
}

bool LetterPermutation::in_dihedral_set() const {
    const auto& s = dihedral_permutations();
    return std::find(s.begin(), s.end(), *this) != s.end();
}

std::string LetterPermutation::cycle_notation() const {
    std::string out;
    unsigned visited = 0;
    for (auto start : kAlphabet) {
        if (visited & (1u << code(start))) continue;
        visited |= 1u << code(start);
        if ((*this)(start) == start) continue;
        out += '(';
        out += to_char(start);
        for (auto n = (*this)(start); n != start; n = (*this)(n)) {
            visited |= 1u << code(n);
            out += ' ';
            out += to_char(n);
        }
        out += ')';
    }
    return out.empty() ? "()" : out;
}

const std::array<LetterPermutation, 8>& dihedral_permutations() {
    static const std::array<LetterPermutation, 8> set = {
        LetterPermutation::parse("()"),         LetterPermutation::parse("(A T G C)"),
        LetterPermutation::parse("(A G)(C T)"), LetterPermutation::parse("(A C G T)"),
        LetterPermutation::parse("(A C)(G T)"), LetterPermutation::parse("(A G)"),
        LetterPermutation::parse("(A T)(C G)"), LetterPermutation::parse("(C T)"),
    };
    return set;
}

DnaSequence apply_permutation(const LetterPermutation& sigma, const DnaSequence& s) {
    std::vector<Nucleotide> out;
    out.reserve(s.size());
    for (Nucleotide n : s.letters()) out.push_back(sigma(n));
    return DnaSequence(std::move(out));
}

Kmer apply_permutation(const LetterPermutation& sigma, const Kmer& w) {
    std::uint64_t packed = 0;
    for (int t = 0; t < w.size(); ++t) packed = (packed << 2) | code(sigma(w.at(t)));
    return Kmer(packed, w.size());
}

}  // namespace chaoskit
