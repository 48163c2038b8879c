#pragma once

#include <array>
#include <string>
#include <string_view>

#include "chaoskit/cgr.hpp"
#include "chaoskit/sequence.hpp"

namespace chaoskit {

// Elements of the symmetry group of the square: r rotates by a quarter turn
// counter-clockwise, s reflects across the horizontal axis.
enum class SymmetryName { E, R, R2, R3, S, SR, SR2, SR3 };

struct Symmetry {
    SymmetryName name;
    // Row-major 2x2 matrix acting on column vectors (x, y).
    std::array<int, 4> matrix;

    std::string label() const;  // "e", "r", "r^2", ..., "sr^3"
    Corner apply(Corner c) const;
    CgrPoint apply(const CgrPoint& p) const;

    friend bool operator==(const Symmetry& a, const Symmetry& b) { return a.name == b.name; }
};

const std::array<Symmetry, 8>& all_symmetries();
Symmetry symmetry(SymmetryName name);
Symmetry parse_symmetry(std::string_view label);
// Matrix product a * b (apply b first).
Symmetry compose(const Symmetry& a, const Symmetry& b);
Symmetry inverse(const Symmetry& h);

// The letter permutation induced by h on the corners of the square.
LetterPermutation permutation_for_symmetry(const Symmetry& h);
// Inverse of the above; throws UnsupportedPermutationError for the 16
// permutations that do not come from a square symmetry.
Symmetry symmetry_for_permutation(const LetterPermutation& sigma);

CgrTrajectory symmetry_apply_trajectory(const Symmetry& h, const CgrTrajectory& t);

// If s avoids alpha, then sigma(s) avoids sigma(alpha). Requires sigma in the
// dihedral set.
Kmer avoided_kmer_image(const LetterPermutation& sigma, const Kmer& alpha);

}  // namespace chaoskit
