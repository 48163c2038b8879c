#include "chaoskit/imaging.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "chaoskit/errors.hpp"

namespace chaoskit {

namespace {

void check_render_order(int r) {
    if (r < 1 || r > kMaxRenderOrder)
        throw RangeError("resolution order must be in [1, 16], got " + std::to_string(r));
}

// Same cell walk as fcgr_grid, marking pixels instead of counting, so orders
// past the dense FCGR limit still render.
void mark_occupancy(const DnaSequence& s, int r, GrayImage& img) {
    static constexpr std::uint8_t kRowBit[4] = {1, 0, 0, 1};  // A, T on the bottom half
    static constexpr std::uint8_t kColBit[4] = {0, 0, 1, 1};  // G, T on the right half
    std::uint64_t row = 0, col = 0;
    const auto letters = s.letters();
    for (std::size_t m = 1; m <= letters.size(); ++m) {
        const unsigned c = code(letters[m - 1]);
        row = (row >> 1) | (std::uint64_t{kRowBit[c]} << (r - 1));
        col = (col >> 1) | (std::uint64_t{kColBit[c]} << (r - 1));
        if (m >= static_cast<std::size_t>(r)) img.at(row, col) = 0;
    }
}

}  // namespace

GrayImage render_cgr(const DnaSequence& s, int r) {
    check_render_order(r);
    if (s.size() < static_cast<std::size_t>(r))
        throw EmptyWindowError("sequence of length " + std::to_string(s.size()) + " is shorter than r=" +
                               std::to_string(r));
    const std::size_t side = std::size_t{1} << r;
    GrayImage img(side, side);
    mark_occupancy(s, r, img);
    return img;
}

GrayImage render_cgr(std::span<const DnaSequence> records, int r) {
    check_render_order(r);
    const std::size_t side = std::size_t{1} << r;
    GrayImage img(side, side);
    bool any = false;
    for (const auto& s : records) {
        if (s.size() < static_cast<std::size_t>(r)) continue;
        mark_occupancy(s, r, img);
        any = true;
    }
    if (!any) throw EmptyWindowError("no record is at least r=" + std::to_string(r) + " letters long");
    return img;
}

IntensityScale parse_scale(std::string_view name) {
    if (name == "linear") return IntensityScale::Linear;
    if (name == "log") return IntensityScale::Log;
    throw ValidationError("unknown scale '" + std::string(name) + "' (expected linear or log)");
}

GrayImage render_fcgr(const FcgrMatrix& f, IntensityScale scale) {
    GrayImage img(f.dim(), f.dim());
    const std::uint64_t max = f.max_entry();
    if (max == 0) return img;
    const double log_max = std::log1p(static_cast<double>(max));
    for (std::size_t i = 0; i < f.dim(); ++i) {
        for (std::size_t j = 0; j < f.dim(); ++j) {
            const std::uint64_t c = f.at(i, j);
            std::uint64_t dark;
            if (scale == IntensityScale::Linear) {
                dark = static_cast<std::uint64_t>((static_cast<unsigned __int128>(c) * 255) / max);
            } else {
                dark = static_cast<std::uint64_t>(std::floor(255.0 * std::log1p(static_cast<double>(c)) / log_max));
                if (dark > 255) dark = 255;
            }
            img.at(i, j) = static_cast<std::uint8_t>(255 - dark);
        }
    }
    return img;
}

GrayImage transform_pixels(const GrayImage& img, const Symmetry& h) {
    if (img.width != img.height || img.width == 0 || (img.width & (img.width - 1)) != 0)
        throw ValidationError("pixel remapping needs a square power-of-two image");
    // Cell centers scaled by 2^r: X = 2j - (2^r - 1), Y = (2^r - 1) - 2i.
    const auto edge = static_cast<long long>(img.width) - 1;
    const auto& a = h.matrix;
    GrayImage out(img.width, img.height);
    for (long long i = 0; i <= edge; ++i) {
        for (long long j = 0; j <= edge; ++j) {
            const long long x = 2 * j - edge;
            const long long y = edge - 2 * i;
            const long long x2 = a[0] * x + a[1] * y;
            const long long y2 = a[2] * x + a[3] * y;
            out.at(static_cast<std::size_t>((edge - y2) / 2), static_cast<std::size_t>((x2 + edge) / 2)) =
                img.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
    return out;
}

void write_pgm(std::ostream& out, const GrayImage& img) {
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw IoError("write failure while emitting PGM");
}

std::string encode_pgm(const GrayImage& img) {
    std::ostringstream out;
    write_pgm(out, img);
    return std::move(out).str();
}

void write_pgm_file(const std::string& path, const GrayImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_pgm(out, img);
}

GrayImage read_pgm(std::istream& in) {
    std::string magic;
    std::size_t w = 0, h = 0;
    int maxval = 0;
    if (!(in >> magic >> w >> h >> maxval) || magic != "P5" || maxval != 255)
        throw ValidationError("not an 8-bit binary PGM");
    in.get();  // single whitespace byte after the header
    GrayImage img(w, h);
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) throw ValidationError("truncated PGM data");
    return img;
}

}  // namespace chaoskit
