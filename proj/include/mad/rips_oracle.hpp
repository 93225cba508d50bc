#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "mad/error.hpp"
#include "mad/persistence.hpp"

namespace mad {

/// Reference barcode for small clouds, kept deliberately independent of
/// vr_barcode: it materializes the complete filtered boundary matrix over
/// all simplices of dimension <= 2 within the threshold and runs the plain
/// left-to-right reduction. Quadratic in the simplex count, hence the size
/// cap, but semantically identical output.
inline PersistenceBarcode brute_force_barcode(const PointCloud& pc,
                                              const FiltrationParams& params = {}) {
    if (params.max_dim < 0 || params.max_dim > 1)
        fail(errc::invalid_config, "max_dim must be 0 or 1");
    if (!(params.threshold > 0.0)) fail(errc::invalid_config, "threshold must be positive");
    const int n = static_cast<int>(pc.points.size());
    if (n == 0) fail(errc::empty_cloud, "point cloud has no landmarks");
    if (n > 12) fail(errc::cloud_too_large, "oracle handles at most 12 points");

    const double thr2 = params.threshold * params.threshold;
    const auto d2 = [&](int a, int b) { return detail::sq_dist(pc.points[a], pc.points[b]); };

    struct Simplex {
        std::int64_t diam2;
        int dim;
        std::array<int, 3> v; // ascending, unused slots = -1
    };
    std::vector<Simplex> simplices;
    for (int a = 0; a < n; ++a) simplices.push_back({0, 0, {a, -1, -1}});
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (static_cast<double>(d2(a, b)) <= thr2) simplices.push_back({d2(a, b), 1, {a, b, -1}});
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) {
                const std::int64_t diam2 = std::max({d2(a, b), d2(a, c), d2(b, c)});
                if (static_cast<double>(diam2) <= thr2) simplices.push_back({diam2, 2, {a, b, c}});
            }

    // Simplexwise filtration order: by value, then dimension (faces first on
    // ties), then vertex lexicographic.
    std::sort(simplices.begin(), simplices.end(), [](const Simplex& a, const Simplex& b) {
        if (a.diam2 != b.diam2) return a.diam2 < b.diam2;
        if (a.dim != b.dim) return a.dim < b.dim;
        return a.v < b.v;
    });

    std::map<std::array<int, 3>, int> index_of; // (dim implied by -1 slots)
    for (std::size_t i = 0; i < simplices.size(); ++i) index_of[simplices[i].v] = static_cast<int>(i);

    const auto boundary = [&](const Simplex& s) {
        std::vector<int> faces;
        if (s.dim == 1) {
            faces.push_back(index_of.at({s.v[0], -1, -1}));
            faces.push_back(index_of.at({s.v[1], -1, -1}));
        } else if (s.dim == 2) {
            faces.push_back(index_of.at({s.v[0], s.v[1], -1}));
            faces.push_back(index_of.at({s.v[0], s.v[2], -1}));
            faces.push_back(index_of.at({s.v[1], s.v[2], -1}));
        }
        std::sort(faces.begin(), faces.end());
        return faces;
    };

    const auto add_mod2 = [](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> out;
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                      std::back_inserter(out));
        return out;
    };

    const int total = static_cast<int>(simplices.size());
    std::vector<std::vector<int>> reduced(simplices.size());
    std::vector<int> owner_of_low(simplices.size(), -1);
    std::vector<int> paired_with(simplices.size(), -1);
    for (int j = 0; j < total; ++j) {
        auto col = boundary(simplices[static_cast<std::size_t>(j)]);
        while (!col.empty() && owner_of_low[static_cast<std::size_t>(col.back())] != -1)
            col = add_mod2(col, reduced[static_cast<std::size_t>(
                                    owner_of_low[static_cast<std::size_t>(col.back())])]);
        if (!col.empty()) {
            const int low = col.back();
            owner_of_low[static_cast<std::size_t>(low)] = j;
            paired_with[static_cast<std::size_t>(low)] = j;
            paired_with[static_cast<std::size_t>(j)] = low;
        }
        reduced[static_cast<std::size_t>(j)] = std::move(col);
    }

    PersistenceBarcode barcode;
    barcode.threshold = params.threshold;
    const auto value = [&](int i) {
        return std::sqrt(static_cast<double>(simplices[static_cast<std::size_t>(i)].diam2));
    };
    for (int i = 0; i < total; ++i) {
        const Simplex& s = simplices[static_cast<std::size_t>(i)];
        const int partner = paired_with[static_cast<std::size_t>(i)];
        const bool positive = reduced[static_cast<std::size_t>(i)].empty();
        if (!positive) continue; // i is the death of some pair
        if (partner != -1 && partner > i) {
            // finite bar [value(i), value(partner))
            if (s.dim == 0) {
                barcode.dim0.push_back({0.0, value(partner), false});
            } else if (s.dim == 1 &&
                       simplices[static_cast<std::size_t>(partner)].diam2 > s.diam2) {
                barcode.dim1.push_back({value(i), value(partner), false});
            }
        } else if (partner == -1) {
            if (s.dim == 0) {
                barcode.dim0.push_back({0.0, params.threshold, true});
            } else if (s.dim == 1 && params.max_dim >= 1) {
                barcode.dim1.push_back({value(i), params.threshold, true});
            }
        }
    }
    if (params.max_dim < 1) barcode.dim1.clear();

    detail::sort_bars(barcode.dim0);
    detail::sort_bars(barcode.dim1);
    return barcode;
}

} // namespace mad
