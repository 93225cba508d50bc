#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

#include "mad/error.hpp"
#include "mad/image.hpp"

namespace mad {

/// Configuration for the local binary pattern landmark extractor.
///
/// The 8-bit code compares a pixel with its Moore neighborhood, clockwise
/// from the top-left corner (TL, T, TR, R, BR, B, BL, L), most significant
/// bit first. A neighbor greater than or equal to the center maps to 1.
struct LbpConfig {
    std::uint8_t target_code = 0b01111000;
    std::array<std::pair<int, int>, 8> neighbor_order = {{
        {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1},
    }};
};

struct Point {
    int row = 0;
    int col = 0;
    friend auto operator<=>(const Point&, const Point&) = default;
};

/// Landmark coordinates, interior pixels only, raster order, no duplicates.
struct PointCloud {
    std::vector<Point> points;
    int height = 0;
    int width = 0;
};

/// Number of 0<->1 changes when reading the 8 bits circularly.
inline int circular_transitions(std::uint8_t code) {
    const std::uint8_t rotated = static_cast<std::uint8_t>((code << 1) | (code >> 7));
    return std::popcount(static_cast<std::uint8_t>(code ^ rotated));
}

inline bool is_uniform(std::uint8_t code) { return circular_transitions(code) <= 2; }

/// LBP code of a 3x3 patch, patch[1][1] being the center.
inline std::uint8_t lbp_code(const std::array<std::array<std::uint8_t, 3>, 3>& patch,
                             const LbpConfig& cfg = {}) {
    std::uint8_t code = 0;
    for (const auto& [dr, dc] : cfg.neighbor_order) {
        code = static_cast<std::uint8_t>(code << 1);
        if (patch[1 + dr][1 + dc] >= patch[1][1]) code |= 1;
    }
    return code;
}

/// LBP code of the interior pixel (r, c).
inline std::uint8_t lbp_code_at(const GrayImage& img, int r, int c, const LbpConfig& cfg = {}) {
    const std::uint8_t center = img(r, c);
    std::uint8_t code = 0;
    for (const auto& [dr, dc] : cfg.neighbor_order) {
        code = static_cast<std::uint8_t>(code << 1);
        if (img(r + dr, c + dc) >= center) code |= 1;
    }
    return code;
}

/// Collect every interior pixel whose LBP code equals the target code.
/// Border pixels are skipped; the result is in raster-scan order.
inline PointCloud extract_landmarks(const GrayImage& img, const LbpConfig& cfg = {}) {
    if (img.height() < 3 || img.width() < 3)
        fail(errc::image_too_small, "need at least a 3x3 image for LBP landmarks");
    PointCloud pc;
    pc.height = img.height();
    pc.width = img.width();
    for (int r = 1; r + 1 < img.height(); ++r)
        for (int c = 1; c + 1 < img.width(); ++c)
            if (lbp_code_at(img, r, c, cfg) == cfg.target_code) pc.points.push_back({r, c});
    return pc;
}

} // namespace mad
