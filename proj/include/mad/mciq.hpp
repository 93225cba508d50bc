#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "mad/error.hpp"
#include "mad/feature.hpp"
#include "mad/image.hpp"

namespace mad {

/// Per-block statistics over the flattened (row-major) pixel sequence.
/// Variance uses the n-1 denominator; skewness and kurtosis are the third
/// and fourth central moment sums normalized by (n-1)*sigma^3 and
/// (n-1)*sigma^4. A constant block has zero deviations, so its skewness and
/// kurtosis are undefined and flagged.
struct BlockStats {
    double mean = 0.0;
    double variance = 0.0;
    double stddev = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;
    bool moments_defined = false; // false iff stddev == 0
};

/// Pairwise quality indices between two same-size blocks, each in [-1, 1].
/// Degenerate denominators map the index to 0.
struct PairIndices {
    double correlation = 0.0;
    double luminance = 0.0;
    double contrast = 0.0;
    double kurtosis_idx = 0.0;
    double skewness_idx = 0.0;
};

inline constexpr int kMciqBins = 10;
inline constexpr int kMciqLength = 5 * kMciqBins;
inline constexpr int kMciqPairCount = kBlockCount * (kBlockCount - 1) / 2; // 630

namespace detail {

struct BlockData {
    BlockStats stats;
    std::vector<double> centered; // x_i - mean, flattening order preserved
};

inline BlockData block_data(const GrayImage& block) {
    const std::size_t n = block.pixels().size();
    if (n < 2) fail(errc::block_too_small, "block needs at least 2 pixels");
    BlockData d;
    double sum = 0.0;
    for (std::uint8_t p : block.pixels()) sum += p;
    d.stats.mean = sum / static_cast<double>(n);
    d.centered.reserve(n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (std::uint8_t p : block.pixels()) {
        const double c = p - d.stats.mean;
        d.centered.push_back(c);
        const double c2 = c * c;
        m2 += c2;
        m3 += c2 * c;
        m4 += c2 * c2;
    }
    const double denom = static_cast<double>(n - 1);
    d.stats.variance = m2 / denom;
    d.stats.stddev = std::sqrt(d.stats.variance);
    if (d.stats.stddev > 0.0) {
        d.stats.moments_defined = true;
        const double s3 = d.stats.stddev * d.stats.stddev * d.stats.stddev;
        d.stats.skewness = m3 / (denom * s3);
        d.stats.kurtosis = m4 / (denom * s3 * d.stats.stddev);
    }
    return d;
}

inline double clamp_index(double v) {
    if (v < -1.0) return -1.0;
    if (v > 1.0) return 1.0;
    return v;
}

inline double symmetric_ratio(double a, double b) {
    const double denom = a * a + b * b;
    return denom > 0.0 ? clamp_index(2.0 * a * b / denom) : 0.0;
}

inline PairIndices pair_indices_core(const BlockData& x, const BlockData& y) {
    PairIndices out;
    const std::size_t n = x.centered.size();
    double cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) cov += x.centered[i] * y.centered[i];
    cov /= static_cast<double>(n - 1);
    if (x.stats.stddev > 0.0 && y.stats.stddev > 0.0)
        out.correlation = clamp_index(cov / (x.stats.stddev * y.stats.stddev));
    out.luminance = symmetric_ratio(x.stats.mean, y.stats.mean);
    out.contrast = symmetric_ratio(x.stats.stddev, y.stats.stddev);
    if (x.stats.moments_defined && y.stats.moments_defined) {
        out.kurtosis_idx = symmetric_ratio(x.stats.kurtosis, y.stats.kurtosis);
        out.skewness_idx = symmetric_ratio(x.stats.skewness, y.stats.skewness);
    }
    return out;
}

/// Histogram bin over [-1, 1]: 10 equal-width bins, half-open except the
/// last which also includes 1.0.
inline int mciq_bin(double v) {
    int bin = static_cast<int>(std::floor((v + 1.0) * 5.0));
    if (bin < 0) bin = 0;
    if (bin >= kMciqBins) bin = kMciqBins - 1;
    return bin;
}

} // namespace detail

inline BlockStats block_stats(const GrayImage& block) { return detail::block_data(block).stats; }

inline PairIndices pair_indices(const GrayImage& x, const GrayImage& y) {
    if (x.pixels().size() != y.pixels().size())
        fail(errc::size_mismatch, "paired blocks must have the same pixel count");
    return detail::pair_indices_core(detail::block_data(x), detail::block_data(y));
}

/// The 50-dimensional multi-characteristic quality vector: the five indices
/// of all 630 unordered block pairs, each histogrammed into 10 equal bins
/// over [-1, 1], concatenated in the order
/// [correlation, luminance, contrast, kurtosis, skewness]. Entries are raw
/// counts, so every 10-bin segment sums to 630.
inline FeatureVector mciq_vector(const GrayImage& img) {
    const BlockGrid grid = partition_blocks(img);
    std::vector<detail::BlockData> data;
    data.reserve(grid.blocks.size());
    for (const auto& block : grid.blocks) data.push_back(detail::block_data(block));

    FeatureVector fv;
    fv.kind = FeatureKind::mciq;
    fv.values.assign(kMciqLength, 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t j = i + 1; j < data.size(); ++j) {
            const PairIndices idx = detail::pair_indices_core(data[i], data[j]);
            fv.values[static_cast<std::size_t>(detail::mciq_bin(idx.correlation))] += 1.0;
            fv.values[static_cast<std::size_t>(kMciqBins + detail::mciq_bin(idx.luminance))] += 1.0;
            fv.values[static_cast<std::size_t>(2 * kMciqBins + detail::mciq_bin(idx.contrast))] +=
                1.0;
            fv.values[static_cast<std::size_t>(3 * kMciqBins +
                                               detail::mciq_bin(idx.kurtosis_idx))] += 1.0;
            fv.values[static_cast<std::size_t>(4 * kMciqBins +
                                               detail::mciq_bin(idx.skewness_idx))] += 1.0;
        }
    }
    return fv;
}

/// Full 36x36 index matrix per characteristic (row-major), in the same
/// characteristic order as mciq_vector. Diagonal entries are the indices of
/// a block paired with itself, honoring the degenerate-to-0 rules.
inline std::array<std::vector<double>, 5> mciq_index_matrices(const GrayImage& img) {
    const BlockGrid grid = partition_blocks(img);
    std::vector<detail::BlockData> data;
    data.reserve(grid.blocks.size());
    for (const auto& block : grid.blocks) data.push_back(detail::block_data(block));

    std::array<std::vector<double>, 5> mats;
    for (auto& m : mats) m.assign(kBlockCount * kBlockCount, 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t j = i; j < data.size(); ++j) {
            const PairIndices idx = detail::pair_indices_core(data[i], data[j]);
            const std::array<double, 5> vals = {idx.correlation, idx.luminance, idx.contrast,
                                                idx.kurtosis_idx, idx.skewness_idx};
            for (std::size_t k = 0; k < 5; ++k) {
                mats[k][i * kBlockCount + j] = vals[k];
                mats[k][j * kBlockCount + i] = vals[k];
            }
        }
    }
    return mats;
}

} // namespace mad
