#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chaoskit {

// DNA letters. The enumerator values are the 2-bit codes used for packing, so
// the natural order A < C < G < T is also the numeric order.
enum class Nucleotide : std::uint8_t { A = 0, C = 1, G = 2, T = 3 };

inline constexpr std::array<Nucleotide, 4> kAlphabet = {Nucleotide::A, Nucleotide::C,
                                                        Nucleotide::G, Nucleotide::T};

constexpr std::uint8_t code(Nucleotide n) { return static_cast<std::uint8_t>(n); }
constexpr Nucleotide nucleotide_from_code(unsigned c) { return static_cast<Nucleotide>(c & 3u); }
char to_char(Nucleotide n);
// Case-insensitive; nullopt for anything outside {A,C,G,T}.
std::optional<Nucleotide> nucleotide_from_char(char c);

// Ordered run of nucleotides, one 2-bit code per byte. The empty sequence is valid.
class DnaSequence {
public:
    DnaSequence() = default;
    explicit DnaSequence(std::vector<Nucleotide> letters) : letters_(std::move(letters)) {}

    // Throws ValidationError on any non-ACGT character (case-insensitive).
    static DnaSequence from_string(std::string_view text);

    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    Nucleotide operator[](std::size_t i) const { return letters_[i]; }
    std::span<const Nucleotide> letters() const { return letters_; }

    void push_back(Nucleotide n) { letters_.push_back(n); }
    void reserve(std::size_t n) { letters_.reserve(n); }
    void append(const DnaSequence& other);
    DnaSequence substr(std::size_t pos, std::size_t len) const;

    std::string str() const;

    friend bool operator==(const DnaSequence&, const DnaSequence&) = default;

private:
    std::vector<Nucleotide> letters_;
};

inline constexpr int kMaxKmerLength = 32;
// Largest k for which dense 4^k vectors and 2^k x 2^k matrices are allocated.
inline constexpr int kMaxDenseOrder = 13;

// A word of length 1..32 stored as its packed base-4 code, first letter in the
// most significant position. The packed code is exactly the lexicographic index.
class Kmer {
public:
    Kmer(std::uint64_t packed, int k);

    static Kmer from_string(std::string_view text);
    static Kmer from_sequence(const DnaSequence& s);

    int size() const { return k_; }
    std::uint64_t packed() const { return packed_; }
    // Letter at position t in [0, k).
    Nucleotide at(int t) const {
        return nucleotide_from_code(static_cast<unsigned>(packed_ >> (2 * (k_ - 1 - t))));
    }
    DnaSequence to_sequence() const;
    std::string str() const;

    friend bool operator==(const Kmer&, const Kmer&) = default;
    friend std::strong_ordering operator<=>(const Kmer& a, const Kmer& b) {
        if (auto c = a.k_ <=> b.k_; c != 0) return c;
        return a.packed_ <=> b.packed_;
    }

private:
    std::uint64_t packed_ = 0;
    int k_ = 1;
};

constexpr std::uint64_t kmer_space(int k) { return std::uint64_t{1} << (2 * k); }

std::uint64_t kmer_index(const Kmer& w);
// Throws RangeError when i >= 4^k or k is outside [1, 32].
Kmer kmer_from_index(std::uint64_t i, int k);

// Occurrence counts for every k-mer, indexed by kmer_index.
struct KmerFrequencyVector {
    int k = 1;
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const;
    friend bool operator==(const KmerFrequencyVector&, const KmerFrequencyVector&) = default;
};

// Sliding-window counts with overlaps. Throws EmptyWindowError when |s| < k
// and RangeError when k is outside [1, kMaxDenseOrder].
KmerFrequencyVector count_kmers(const DnaSequence& s, int k);
// Adds the windows of s into an existing vector of the same order.
void accumulate_kmers(const DnaSequence& s, KmerFrequencyVector& into);
std::uint64_t occurrences(const DnaSequence& s, const Kmer& w);

// Calls fn(code) for every k-window of s, left to right.
template <typename Fn>
void for_each_kmer(const DnaSequence& s, int k, Fn&& fn) {
    const std::uint64_t mask = k == 32 ? ~std::uint64_t{0} : kmer_space(k) - 1;
    std::uint64_t code_ = 0;
    const auto letters = s.letters();
    for (std::size_t i = 0; i < letters.size(); ++i) {
        code_ = ((code_ << 2) | code(letters[i])) & mask;
        if (i + 1 >= static_cast<std::size_t>(k)) fn(code_);
    }
}

// A bijection of {A,C,G,T}, extended letterwise to sequences. Any of the 24
// permutations can be represented; in_dihedral_set() tells whether it is one
// of the eight that correspond to symmetries of the CGR square.
class LetterPermutation {
public:
    LetterPermutation();  // identity
    // image[x] is the image of letter x. Throws ValidationError if not a bijection.
    explicit LetterPermutation(std::array<Nucleotide, 4> image);

    // Cycle notation such as "(A G)(C T)", "(A,T,G,C)" or "()". Whitespace and
    // commas inside cycles are ignored. Throws ValidationError on malformed input.
    static LetterPermutation parse(std::string_view cycles);

    Nucleotide operator()(Nucleotide n) const { return image_[code(n)]; }
    LetterPermutation inverse() const;
    LetterPermutation then(const LetterPermutation& next) const;  // next ∘ this
    bool in_dihedral_set() const;
    std::string cycle_notation() const;
    const std::array<Nucleotide, 4>& image() const { return image_; }

    friend bool operator==(const LetterPermutation&, const LetterPermutation&) = default;

private:
    std::array<Nucleotide, 4> image_;
};

// The eight permutations that correspond to square symmetries, in the order
// (), (A T G C), (A G)(C T), (A C G T), (A C)(G T), (A G), (A T)(C G), (C T).
const std::array<LetterPermutation, 8>& dihedral_permutations();

DnaSequence apply_permutation(const LetterPermutation& sigma, const DnaSequence& s);
Kmer apply_permutation(const LetterPermutation& sigma, const Kmer& w);

}  // namespace chaoskit
