#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chaoskit/cgr.hpp"
#include "chaoskit/symmetry.hpp"

namespace chaoskit {

// 8-bit grayscale raster, row-major, 0 = black.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(std::size_t w, std::size_t h, std::uint8_t fill = 255) : width(w), height(h), pixels(w * h, fill) {}

    std::uint8_t& at(std::size_t row, std::size_t col) { return pixels[row * width + col]; }
    std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

inline constexpr int kMaxRenderOrder = 16;

// Occupancy image of the order-r grid: a pixel is black when some r-mer of s
// lands in that cell. Throws RangeError unless 1 <= r <= 16 and
// EmptyWindowError when |s| < r.
GrayImage render_cgr(const DnaSequence& s, int r);
// Union of the occupancy of several sequences (records shorter than r are skipped).
GrayImage render_cgr(std::span<const DnaSequence> records, int r);

enum class IntensityScale { Linear, Log };
IntensityScale parse_scale(std::string_view name);

// Darker means more counts. linear: 255 - floor(255 c / max);
// log: 255 - floor(255 ln(1 + c) / ln(1 + max)). All-zero renders white.
GrayImage render_fcgr(const FcgrMatrix& f, IntensityScale scale = IntensityScale::Log);

// Moves each pixel of a 2^r x 2^r image to the cell that h maps its center to.
GrayImage transform_pixels(const GrayImage& img, const Symmetry& h);

// Binary PGM: "P5\n<w> <h>\n255\n" then the raw rows.
void write_pgm(std::ostream& out, const GrayImage& img);
std::string encode_pgm(const GrayImage& img);
void write_pgm_file(const std::string& path, const GrayImage& img);
GrayImage read_pgm(std::istream& in);

}  // namespace chaoskit
