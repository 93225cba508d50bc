#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include <png.h>

#include "mad/error.hpp"

namespace mad {

/// Single-channel 8-bit image, row-major.
class GrayImage {
public:
    GrayImage() = default;

    GrayImage(int height, int width, std::uint8_t fill = 0)
        : height_(height), width_(width),
          pixels_(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill) {
        if (height < 1 || width < 1) fail(errc::invalid_config, "image dimensions must be positive");
    }

    GrayImage(int height, int width, std::vector<std::uint8_t> pixels)
        : height_(height), width_(width), pixels_(std::move(pixels)) {
        if (height < 1 || width < 1) fail(errc::invalid_config, "image dimensions must be positive");
        if (pixels_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width))
            fail(errc::size_mismatch, "pixel buffer does not match dimensions");
    }

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }

    std::uint8_t operator()(int r, int c) const {
        return pixels_[static_cast<std::size_t>(r) * width_ + c];
    }
    std::uint8_t& operator()(int r, int c) {
        return pixels_[static_cast<std::size_t>(r) * width_ + c];
    }

    const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }
    std::vector<std::uint8_t>& pixels() noexcept { return pixels_; }

    bool operator==(const GrayImage&) const = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<std::uint8_t> pixels_;
};

inline constexpr int kCanonicalHeight = 280;
inline constexpr int kCanonicalWidth = 270;
inline constexpr int kGridRows = 6;
inline constexpr int kGridCols = 6;
inline constexpr int kBlockCount = kGridRows * kGridCols;

/// 6x6 grid of same-size blocks cut from one image, row-major.
struct BlockGrid {
    std::vector<GrayImage> blocks;
    int block_height = 0;
    int block_width = 0;
};

/// ITU-R BT.601 luma, rounded to nearest integer.
inline std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    double y = 0.299 * r + 0.587 * g + 0.114 * b;
    long v = std::lround(y);
    if (v < 0) v = 0;
    if (v > 255) v = 255;
    return static_cast<std::uint8_t>(v);
}

namespace detail {

inline int pgm_next_token(std::istream& in, std::string& tok) {
    tok.clear();
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (std::isspace(ch)) {
            ch = in.get();
        } else {
            break;
        }
    }
    if (ch == EOF) return 0;
    while (ch != EOF && !std::isspace(ch) && ch != '#') {
        tok.push_back(static_cast<char>(ch));
        ch = in.get();
    }
    if (ch == '#') in.unget();
    return 1;
}

inline long pgm_int_token(std::istream& in, const std::string& path) {
    std::string tok;
    if (!pgm_next_token(in, tok)) fail(errc::corrupt_image, "truncated PGM header: " + path);
    long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        fail(errc::corrupt_image, "bad PGM header token: " + path);
    return v;
}

inline GrayImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::file_not_found, path.string());
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5')
        fail(errc::unsupported_format, "not a binary PGM: " + path.string());
    long w = pgm_int_token(in, path.string());
    long h = pgm_int_token(in, path.string());
    long maxval = pgm_int_token(in, path.string());
    if (w < 1 || h < 1 || w > 1 << 20 || h > 1 << 20)
        fail(errc::corrupt_image, "bad PGM dimensions: " + path.string());
    if (maxval < 1 || maxval > 255)
        fail(errc::unsupported_format, "only 8-bit PGM supported: " + path.string());
    // header ends with exactly one whitespace byte, already consumed by tokenizer
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(pixels.size()))
        fail(errc::corrupt_image, "truncated PGM pixel data: " + path.string());
    return GrayImage(static_cast<int>(h), static_cast<int>(w), std::move(pixels));
}

inline GrayImage load_png(const std::filesystem::path& path) {
    png_image im;
    std::memset(&im, 0, sizeof(im));
    im.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&im, path.string().c_str())) {
        std::string msg = im.message;
        png_image_free(&im);
        fail(errc::corrupt_image, "unreadable PNG " + path.string() + ": " + msg);
    }
    const auto fmt = im.format;
    if (fmt & (PNG_FORMAT_FLAG_ALPHA | PNG_FORMAT_FLAG_COLORMAP | PNG_FORMAT_FLAG_LINEAR)) {
        png_image_free(&im);
        fail(errc::unsupported_format,
             "only 8-bit grayscale or RGB PNG supported: " + path.string());
    }
    const bool color = (fmt & PNG_FORMAT_FLAG_COLOR) != 0;
    im.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const int h = static_cast<int>(im.height);
    const int w = static_cast<int>(im.width);
    std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(im));
    if (!png_image_finish_read(&im, nullptr, buf.data(), 0, nullptr)) {
        std::string msg = im.message;
        png_image_free(&im);
        fail(errc::corrupt_image, "corrupt PNG " + path.string() + ": " + msg);
    }
    if (!color) return GrayImage(h, w, std::move(buf));
    std::vector<std::uint8_t> gray(static_cast<std::size_t>(h) * static_cast<std::size_t>(w));
    for (std::size_t i = 0; i < gray.size(); ++i)
        gray[i] = luma(buf[3 * i], buf[3 * i + 1], buf[3 * i + 2]);
    return GrayImage(h, w, std::move(gray));
}

} // namespace detail

/// Load a PGM (binary P5) or PNG (8-bit gray or RGB) file as grayscale.
/// The container is detected from the file's magic bytes, not its extension.
inline GrayImage load_grayscale(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) fail(errc::file_not_found, path.string());
    unsigned char magic[8] = {0};
    probe.read(reinterpret_cast<char*>(magic), 8);
    const auto got = probe.gcount();
    probe.close();
    static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    if (got >= 8 && std::equal(png_sig, png_sig + 8, magic)) return detail::load_png(path);
    if (got >= 2 && magic[0] == 'P' && magic[1] == '5') return detail::load_pgm(path);
    fail(errc::unsupported_format, "unrecognized image format: " + path.string());
}

inline void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot open for writing: " + path.string());
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels().data()),
              static_cast<std::streamsize>(img.pixels().size()));
    if (!out) fail(errc::io_error, "short write: " + path.string());
}

inline void save_png(const GrayImage& img, const std::filesystem::path& path) {
    png_image im;
    std::memset(&im, 0, sizeof(im));
    im.version = PNG_IMAGE_VERSION;
    im.width = static_cast<png_uint_32>(img.width());
    im.height = static_cast<png_uint_32>(img.height());
    im.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&im, path.string().c_str(), 0, img.pixels().data(), 0, nullptr)) {
        std::string msg = im.message;
        png_image_free(&im);
        fail(errc::io_error, "PNG write failed " + path.string() + ": " + msg);
    }
}

/// Write as PGM or PNG depending on the extension (.pgm default).
inline void save_image(const GrayImage& img, const std::filesystem::path& path) {
    auto ext = path.extension().string();
    for (auto& ch : ext) ch = static_cast<char>(std::tolower(ch));
    if (ext == ".png") {
        save_png(img, path);
    } else if (ext == ".pgm" || ext.empty()) {
        save_pgm(img, path);
    } else {
        fail(errc::unsupported_format, "unsupported output format: " + path.string());
    }
}

/// Corner-aligned bilinear resize; output values rounded to nearest integer.
inline GrayImage resize_bilinear(const GrayImage& img, int target_h = kCanonicalHeight,
                                 int target_w = kCanonicalWidth) {
    if (target_h < 3 || target_w < 3)
        fail(errc::invalid_target, "resize target must be at least 3x3");
    const int sh = img.height(), sw = img.width();
    if (sh == target_h && sw == target_w) return img;
    GrayImage out(target_h, target_w);
    const double ry = target_h > 1 ? static_cast<double>(sh - 1) / (target_h - 1) : 0.0;
    const double rx = target_w > 1 ? static_cast<double>(sw - 1) / (target_w - 1) : 0.0;
    for (int r = 0; r < target_h; ++r) {
        const double fy = r * ry;
        int y0 = static_cast<int>(fy);
        if (y0 > sh - 1) y0 = sh - 1;
        const int y1 = y0 + 1 < sh ? y0 + 1 : sh - 1;
        const double wy = fy - y0;
        for (int c = 0; c < target_w; ++c) {
            const double fx = c * rx;
            int x0 = static_cast<int>(fx);
            if (x0 > sw - 1) x0 = sw - 1;
            const int x1 = x0 + 1 < sw ? x0 + 1 : sw - 1;
            const double wx = fx - x0;
            const double v = (1.0 - wy) * ((1.0 - wx) * img(y0, x0) + wx * img(y0, x1)) +
                             wy * ((1.0 - wx) * img(y1, x0) + wx * img(y1, x1));
            long p = std::lround(v);
            if (p < 0) p = 0;
            if (p > 255) p = 255;
            out(r, c) = static_cast<std::uint8_t>(p);
        }
    }
    return out;
}

/// Cut the image into a 6x6 grid of floor-sized blocks; trailing remainder
/// rows/columns are discarded so all blocks share the same size.
inline BlockGrid partition_blocks(const GrayImage& img) {
    if (img.height() < kGridRows || img.width() < kGridCols)
        fail(errc::image_too_small, "need at least a 6x6 image to partition");
    BlockGrid grid;
    grid.block_height = img.height() / kGridRows;
    grid.block_width = img.width() / kGridCols;
    grid.blocks.reserve(kBlockCount);
    for (int br = 0; br < kGridRows; ++br) {
        for (int bc = 0; bc < kGridCols; ++bc) {
            GrayImage block(grid.block_height, grid.block_width);
            const int r0 = br * grid.block_height;
            const int c0 = bc * grid.block_width;
            for (int r = 0; r < grid.block_height; ++r)
                for (int c = 0; c < grid.block_width; ++c)
                    block(r, c) = img(r0 + r, c0 + c);
            grid.blocks.push_back(std::move(block));
        }
    }
    return grid;
}

/// Per-pixel blend round(alpha*a + (1-alpha)*b). Images must match in size.
inline GrayImage blend(const GrayImage& a, const GrayImage& b, double alpha) {
    if (alpha < 0.0 || alpha > 1.0) fail(errc::alpha_out_of_range, "alpha must be in [0, 1]");
    if (a.height() != b.height() || a.width() != b.width())
        fail(errc::size_mismatch, "blend inputs must have identical dimensions");
    GrayImage out(a.height(), a.width());
    for (std::size_t i = 0; i < out.pixels().size(); ++i) {
        const double v = alpha * a.pixels()[i] + (1.0 - alpha) * b.pixels()[i];
        long p = std::lround(v);
        if (p < 0) p = 0;
        if (p > 255) p = 255;
        out.pixels()[i] = static_cast<std::uint8_t>(p);
    }
    return out;
}

} // namespace mad
