#pragma once

// Independent reference implementations used only by the tests. They work on
// plain strings and fixed-denominator integers and share no code with the
// library beyond the public types they are compared against.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

using Grid = std::vector<std::vector<std::uint64_t>>;

inline const std::string kLetters = "ACGT";

inline std::string random_dna(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> pick(0, 3);
    std::string s(n, 'A');
    for (auto& c : s) c = kLetters[static_cast<std::size_t>(pick(rng))];
    return s;
}

// All k-mers in lexicographic order, generated by sorting every word.
inline std::vector<std::string> all_kmers(int k) {
    std::vector<std::string> words{""};
    for (int t = 0; t < k; ++t) {
        std::vector<std::string> next;
        for (const auto& w : words)
            for (char c : kLetters) next.push_back(w + c);
        words = std::move(next);
    }
    std::sort(words.begin(), words.end(), [](const std::string& a, const std::string& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return kLetters.find(a[i]) < kLetters.find(b[i]);
        return false;
    });
    return words;
}

inline std::uint64_t window_count(const std::string& s, const std::string& w) {
    std::uint64_t n = 0;
    if (w.size() > s.size()) return 0;
    for (std::size_t i = 0; i + w.size() <= s.size(); ++i)
        if (s.compare(i, w.size(), w) == 0) ++n;
    return n;
}

// Counts in lexicographic order, by scanning every window.
inline std::vector<std::uint64_t> window_counts(const std::string& s, int k) {
    std::map<std::string, std::uint64_t> seen;
    for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= s.size(); ++i) ++seen[s.substr(i, static_cast<std::size_t>(k))];
    std::vector<std::uint64_t> out;
    for (const auto& w : all_kmers(k)) out.push_back(seen.count(w) ? seen[w] : 0);
    return out;
}

// Corners: A (-1,-1), C (-1,1), G (1,1), T (1,-1).
inline int corner_x(char c) { return (c == 'G' || c == 'T') ? 1 : -1; }
inline int corner_y(char c) { return (c == 'C' || c == 'G') ? 1 : -1; }

// Trajectory point numerators over the fixed denominator 2^D, by the midpoint
// recursion. Exact while the number of letters is at most D.
struct FixedPoint {
    __int128 x;
    __int128 y;
};

inline std::vector<FixedPoint> fixed_trajectory(const std::string& s, int D) {
    std::vector<FixedPoint> pts{{0, 0}};
    const __int128 one = __int128{1} << D;
    for (char c : s) {
        const auto& p = pts.back();
        pts.push_back({(p.x + corner_x(c) * one) / 2, (p.y + corner_y(c) * one) / 2});
    }
    return pts;
}

// Open-cell binning of one coordinate (numerator over 2^D) at order k.
// Returns -1 when the value lies on a grid line.
inline long long bin_coordinate(__int128 v, int D, int k) {
    const __int128 shifted = (v + (__int128{1} << D)) << (k - 1);  // (v + 1) 2^(k-1), over 2^D
    if (shifted % (__int128{1} << D) == 0) return -1;
    return static_cast<long long>(shifted >> D);
}

inline bool on_grid_line(__int128 v, int D, int k) { return bin_coordinate(v, D, k) < 0; }

// Bins p_i for i >= k into the open order-k cells; row 0 is the top edge.
inline Grid geometric_fcgr(const std::string& s, int k, int D = 60) {
    const std::size_t side = std::size_t{1} << k;
    Grid g(side, std::vector<std::uint64_t>(side, 0));
    const auto pts = fixed_trajectory(s, D);
    for (std::size_t i = static_cast<std::size_t>(k); i < pts.size(); ++i) {
        const long long col = bin_coordinate(pts[i].x, D, k);
        const long long row_from_bottom = bin_coordinate(pts[i].y, D, k);
        if (col < 0 || row_from_bottom < 0) throw std::logic_error("trajectory point on a grid line");
        ++g[side - 1 - static_cast<std::size_t>(row_from_bottom)][static_cast<std::size_t>(col)];
    }
    return g;
}

// Geometric occupancy for long sequences: the point after letter m is
// replaced by the trajectory point of its last `window` letters, which lies
// in the same order-k cell whenever window >= k.
inline std::vector<std::uint8_t> geometric_occupancy(const std::string& s, int k, int window = 60) {
    const std::size_t side = std::size_t{1} << k;
    std::vector<std::uint8_t> px(side * side, 255);
    const __int128 one = __int128{1} << window;
    for (std::size_t m = static_cast<std::size_t>(k); m <= s.size(); ++m) {
        const std::size_t from = m > static_cast<std::size_t>(window) ? m - static_cast<std::size_t>(window) : 0;
        __int128 x = 0, y = 0;
        for (std::size_t t = from; t < m; ++t) {
            x = (x + corner_x(s[t]) * one) / 2;
            y = (y + corner_y(s[t]) * one) / 2;
        }
        const long long col = bin_coordinate(x, window, k);
        const long long row_from_bottom = bin_coordinate(y, window, k);
        if (col < 0 || row_from_bottom < 0) throw std::logic_error("trajectory point on a grid line");
        px[(side - 1 - static_cast<std::size_t>(row_from_bottom)) * side + static_cast<std::size_t>(col)] = 0;
    }
    return px;
}

// M^(k) = M (x) ... (x) M with M = [[C, G], [A, T]], entries concatenated.
inline std::vector<std::vector<std::string>> kronecker_layout(int k) {
    std::vector<std::vector<std::string>> m{{"C", "G"}, {"A", "T"}};
    std::vector<std::vector<std::string>> acc{{""}};
    for (int t = 0; t < k; ++t) {
        const std::size_t n = acc.size();
        std::vector<std::vector<std::string>> next(2 * n, std::vector<std::string>(2 * n));
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t c = 0; c < 2; ++c)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) next[a * n + i][c * n + j] = m[a][c] + acc[i][j];
        acc = std::move(next);
    }
    return acc;
}

inline Grid kronecker_fcgr(const std::string& s, int k) {
    const auto layout = kronecker_layout(k);
    Grid g(layout.size(), std::vector<std::uint64_t>(layout.size()));
    for (std::size_t i = 0; i < layout.size(); ++i)
        for (std::size_t j = 0; j < layout.size(); ++j) g[i][j] = window_count(s, layout[i][j]);
    return g;
}

// Symmetries of the square as listed row-major, with the letter permutation
// each one is paired with.
struct SymmetryRow {
    const char* label;
    std::array<int, 4> matrix;
    const char* permutation;
};

inline const std::array<SymmetryRow, 8> kSymmetryTable = {{
    {"e", {1, 0, 0, 1}, "()"},
    {"r", {0, -1, 1, 0}, "(A T G C)"},
    {"r^2", {-1, 0, 0, -1}, "(A G)(C T)"},
    {"r^3", {0, 1, -1, 0}, "(A C G T)"},
    {"s", {1, 0, 0, -1}, "(A C)(G T)"},
    {"sr", {0, -1, -1, 0}, "(A G)"},
    {"sr^2", {-1, 0, 0, 1}, "(A T)(C G)"},
    {"sr^3", {0, 1, 1, 0}, "(C T)"},
}};

// Letter map from cycle notation over single letters, e.g. "(A G)(C T)".
inline std::map<char, char> letter_map(const std::string& cycles) {
    std::map<char, char> m;
    for (char c : kLetters) m[c] = c;
    std::vector<char> cur;
    for (char c : cycles) {
        if (c == '(') cur.clear();
        else if (c == ')') {
            for (std::size_t i = 0; i < cur.size(); ++i) m[cur[i]] = cur[(i + 1) % cur.size()];
        } else if (c != ' ') cur.push_back(c);
    }
    return m;
}

inline std::string permute(const std::string& s, const std::map<char, char>& m) {
    std::string out = s;
    for (auto& c : out) c = m.at(c);
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Letters of a single-record FASTA file, upper-cased.
inline std::string fasta_letters(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line, out;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '>') continue;
        for (char c : line)
            if (c != '\r') out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    return out;
}

#ifdef CHAOSKIT_TEST_DATA
// Path under tests/ in the source tree.
inline std::string data_path(const std::string& rel) { return std::string(CHAOSKIT_TEST_DATA) + "/" + rel; }
#endif

}  // namespace oracle
