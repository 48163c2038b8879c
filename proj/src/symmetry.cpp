#include "chaoskit/symmetry.hpp"

#include "chaoskit/errors.hpp"

namespace chaoskit {

namespace {

constexpr std::array<Symmetry, 8> kSymmetries = {{
    {SymmetryName::E, {1, 0, 0, 1}},
    {SymmetryName::R, {0, -1, 1, 0}},
    {SymmetryName::R2, {-1, 0, 0, -1}},
    {SymmetryName::R3, {0, 1, -1, 0}},
    {SymmetryName::S, {1, 0, 0, -1}},
    {SymmetryName::SR, {0, -1, -1, 0}},
    {SymmetryName::SR2, {-1, 0, 0, 1}},
    {SymmetryName::SR3, {0, 1, 1, 0}},
}};

constexpr std::array<const char*, 8> kLabels = {"e", "r", "r^2", "r^3", "s", "sr", "sr^2", "sr^3"};

Dyadic combine(int a, const Dyadic& x, int b, const Dyadic& y) {
    Dyadic out;
    if (a) out = out + x.times(a);
    if (b) out = out + y.times(b);
    return out;
}

}  // namespace

std::string Symmetry::label() const { return kLabels[static_cast<std::size_t>(name)]; }

Corner Symmetry::apply(Corner c) const {
    return {matrix[0] * c.x + matrix[1] * c.y, matrix[2] * c.x + matrix[3] * c.y};
}

CgrPoint Symmetry::apply(const CgrPoint& p) const {
    CgrPoint out;
    out.exact = p.exact;
    if (p.exact) {
        out.x = combine(matrix[0], p.x, matrix[1], p.y);
        out.y = combine(matrix[2], p.x, matrix[3], p.y);
    }
    out.fx = matrix[0] * p.fx + matrix[1] * p.fy;
    out.fy = matrix[2] * p.fx + matrix[3] * p.fy;
    return out;
}

const std::array<Symmetry, 8>& all_symmetries() { return kSymmetries; }

Symmetry symmetry(SymmetryName name) { return kSymmetries[static_cast<std::size_t>(name)]; }

Symmetry parse_symmetry(std::string_view label) {
    for (std::size_t n = 0; n < kLabels.size(); ++n)
        if (label == kLabels[n]) return kSymmetries[n];
    throw ValidationError("unknown symmetry '" + std::string(label) + "'");
}

Symmetry compose(const Symmetry& a, const Symmetry& b) {
    const auto& m = a.matrix;
    const auto& n = b.matrix;
    const std::array<int, 4> product = {m[0] * n[0] + m[1] * n[2], m[0] * n[1] + m[1] * n[3],
                                        m[2] * n[0] + m[3] * n[2], m[2] * n[1] + m[3] * n[3]};
    for (const auto& h : kSymmetries)
        if (h.matrix == product) return h;
    throw InconsistencyError("symmetry product left the group");
}

Symmetry inverse(const Symmetry& h) {
    for (const auto& g : kSymmetries)
        if (compose(h, g).name == SymmetryName::E) return g;
    throw InconsistencyError("symmetry without inverse");
}

LetterPermutation permutation_for_symmetry(const Symmetry& h) {
    std::array<Nucleotide, 4> image{};
    for (auto n : kAlphabet) image[code(n)] = label_inverse(h.apply(label(n)));
    return LetterPermutation(image);
}

Symmetry symmetry_for_permutation(const LetterPermutation& sigma) {
    for (const auto& h : kSymmetries)
        if (permutation_for_symmetry(h) == sigma) return h;
    throw UnsupportedPermutationError("permutation " + sigma.cycle_notation() +
                                      " does not correspond to a symmetry of the CGR square");
}

CgrTrajectory symmetry_apply_trajectory(const Symmetry& h, const CgrTrajectory& t) {
    CgrTrajectory out;
    out.source_length = t.source_length;
    out.depth_cap = t.depth_cap;
    out.points.reserve(t.points.size());
    for (const auto& p : t.points) out.points.push_back(h.apply(p));
    return out;
}

Kmer avoided_kmer_image(const LetterPermutation& sigma, const Kmer& alpha) {
    if (!sigma.in_dihedral_set())
        throw UnsupportedPermutationError("permutation " + sigma.cycle_notation() + " is not in the dihedral set");
    return apply_permutation(sigma, alpha);
}

}  // namespace chaoskit
