#pragma once

// Seeded synthetic data for tests: textured images that stand in for face
// photos, alpha-blend "morphs" of pairs of them, and random point clouds.

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "mad/feature.hpp"
#include "mad/image.hpp"
#include "mad/random.hpp"
#include "mad/ulbp.hpp"

namespace testsupport {

inline std::uint8_t clamp_u8(double v) {
    long p = std::lround(v);
    if (p < 0) p = 0;
    if (p > 255) p = 255;
    return static_cast<std::uint8_t>(p);
}

/// Uniform random image with pixels in [lo, hi].
inline mad::GrayImage random_image(mad::Rng& rng, int h, int w, int lo = 0, int hi = 255) {
    mad::GrayImage img(h, w);
    for (auto& p : img.pixels())
        p = static_cast<std::uint8_t>(lo + static_cast<int>(rng.below(
                                               static_cast<std::uint64_t>(hi - lo + 1))));
    return img;
}

/// Portrait-like zoned texture. Two independent slow random fields steer the
/// local brightness (think hair versus skin, roughly 50..200) and the local
/// texture amplitude (log-uniform 3..39, so block contrasts differ by an
/// order of magnitude within one image). Carriers and noise are randomized
/// per image. Blending two such images averages both fields, which pulls
/// every block toward the middle of those ranges and erases the extreme
/// block-pair ratios that genuine images carry.
inline mad::GrayImage textured_image(mad::Rng& rng, int h = mad::kCanonicalHeight,
                                     int w = mad::kCanonicalWidth) {
    using std::numbers::pi;
    const double f1 = rng.uniform(0.06, 0.18), f2 = rng.uniform(0.12, 0.30);
    const double t1 = rng.uniform(0.0, pi), t2 = rng.uniform(0.0, pi);
    const double p1 = rng.uniform(0.0, 2.0 * pi), p2 = rng.uniform(0.0, 2.0 * pi);
    const double mix2 = rng.uniform(0.3, 0.7);
    const double noise = rng.uniform(2.0, 5.0);
    const auto field_params = [&] {
        // oriented plane wave, 0.75..2 periods across the image; the sine
        // dwells near its extremes, so wide bands of the image sit at the
        // ends of the mapped range
        const double angle = rng.uniform(0.0, pi);
        const double periods = rng.uniform(0.75, 2.0);
        return std::array<double, 3>{periods * std::cos(angle) / w,
                                     periods * std::sin(angle) / h,
                                     rng.uniform(0.0, 2.0 * pi)};
    };
    const auto bright_field = field_params();
    const auto amp_field = field_params();
    const auto field_at = [&](const std::array<double, 3>& f, int r, int c) {
        // smooth scalar in [0, 1]
        return 0.5 * (1.0 + std::sin(2.0 * pi * (f[0] * c + f[1] * r) + f[2]));
    };
    mad::GrayImage img(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double mean = 50.0 + 150.0 * field_at(bright_field, r, c);
            const double amp = 3.0 * std::pow(13.0, field_at(amp_field, r, c));
            const double u1 = c * std::cos(t1) + r * std::sin(t1);
            const double u2 = c * std::cos(t2) + r * std::sin(t2);
            const double v = mean +
                             amp * (std::sin(2.0 * pi * f1 * u1 + p1) +
                                    mix2 * std::sin(2.0 * pi * f2 * u2 + p2)) /
                                 (1.0 + mix2) +
                             noise * (2.0 * rng.unit() - 1.0);
            img(r, c) = clamp_u8(v);
        }
    }
    return img;
}

/// 3x3 box blur with clamped borders.
inline mad::GrayImage box_blur3(const mad::GrayImage& img) {
    mad::GrayImage out(img.height(), img.width());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            int sum = 0, cnt = 0;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr < 0 || cc < 0 || rr >= img.height() || cc >= img.width()) continue;
                    sum += img(rr, cc);
                    ++cnt;
                }
            }
            out(r, c) = static_cast<std::uint8_t>((sum + cnt / 2) / cnt);
        }
    }
    return out;
}

/// Seeded stand-in dataset: n_genuine textured images plus n_morph blends of
/// genuine pairs with one pass of mild smoothing.
inline std::pair<std::vector<mad::GrayImage>, std::vector<mad::GrayImage>>
make_synth_dataset(int n_genuine, int n_morph, std::uint64_t seed, int h = mad::kCanonicalHeight,
                   int w = mad::kCanonicalWidth) {
    mad::Rng rng(seed);
    std::vector<mad::GrayImage> genuine;
    genuine.reserve(static_cast<std::size_t>(n_genuine));
    for (int i = 0; i < n_genuine; ++i) genuine.push_back(textured_image(rng, h, w));
    std::vector<mad::GrayImage> morphs;
    morphs.reserve(static_cast<std::size_t>(n_morph));
    for (int i = 0; i < n_morph; ++i) {
        const auto a = rng.below(static_cast<std::uint64_t>(n_genuine));
        auto b = rng.below(static_cast<std::uint64_t>(n_genuine));
        while (b == a) b = rng.below(static_cast<std::uint64_t>(n_genuine));
        morphs.push_back(box_blur3(mad::blend(genuine[a], genuine[b], 0.5)));
    }
    return {std::move(genuine), std::move(morphs)};
}

/// n distinct points sampled from a [0, extent_r] x [0, extent_c] grid.
inline mad::PointCloud random_cloud(mad::Rng& rng, int n, int extent_r, int extent_c) {
    const std::size_t cells =
        static_cast<std::size_t>(extent_r + 1) * static_cast<std::size_t>(extent_c + 1);
    const auto picks = rng.sample_without_replacement(cells, static_cast<std::size_t>(n));
    mad::PointCloud pc;
    pc.height = extent_r + 3;
    pc.width = extent_c + 3;
    for (std::size_t cell : picks) {
        pc.points.push_back({static_cast<int>(cell / (extent_c + 1)),
                             static_cast<int>(cell % (extent_c + 1))});
    }
    return pc;
}

/// Gaussian-ish feature clusters for classifier tests: genuine around -1,
/// morph around +1 along every coordinate, with the given spread.
inline std::vector<mad::FeatureVector> cluster_features(mad::Rng& rng, int per_class, int dim,
                                                        double spread,
                                                        mad::FeatureKind kind = mad::FeatureKind::bs_d0) {
    std::vector<mad::FeatureVector> out;
    for (int cls = 0; cls < 2; ++cls) {
        for (int i = 0; i < per_class; ++i) {
            mad::FeatureVector fv;
            fv.kind = kind;
            fv.label = cls == 0 ? mad::Label::genuine : mad::Label::morph;
            fv.sample_id = std::string(cls == 0 ? "g" : "m") + std::to_string(i);
            for (int d = 0; d < dim; ++d) {
                const double center = cls == 0 ? -1.0 : 1.0;
                fv.values.push_back(center + spread * (2.0 * rng.unit() - 1.0));
            }
            out.push_back(std::move(fv));
        }
    }
    return out;
}

} // namespace testsupport
