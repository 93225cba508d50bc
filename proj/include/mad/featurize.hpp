#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mad/error.hpp"
#include "mad/feature.hpp"
#include "mad/persistence.hpp"

namespace mad {

struct BettiBinningConfig {
    int omega = 24; // vertical lines at 0, 1, ..., omega
};

namespace detail {

inline const std::vector<Bar>& bars_of(const PersistenceBarcode& barcode, int dim) {
    if (dim != 0 && dim != 1) fail(errc::invalid_config, "barcode dimension must be 0 or 1");
    return dim == 0 ? barcode.dim0 : barcode.dim1;
}

inline double median_of_sorted(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double sample_std(const std::vector<double>& v, double mean) {
    if (v.size() <= 1) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

} // namespace detail

/// Betti curve truncated at omega: entry v counts the bars [b, d) of the
/// chosen dimension with b <= v < d. Essential bars count at every line at
/// or after their birth. An empty barcode yields the zero vector.
inline FeatureVector betti_binning(const PersistenceBarcode& barcode, int dim,
                                   const BettiBinningConfig& cfg = {}) {
    if (cfg.omega < 1) fail(errc::invalid_config, "omega must be at least 1");
    const auto& bars = detail::bars_of(barcode, dim);
    FeatureVector fv;
    fv.kind = dim == 0 ? FeatureKind::bb_d0 : FeatureKind::bb_d1;
    fv.values.assign(static_cast<std::size_t>(cfg.omega) + 1, 0.0);
    for (const Bar& bar : bars) {
        for (int v = 0; v <= cfg.omega; ++v) {
            const double line = static_cast<double>(v);
            const bool alive =
                bar.essential ? line >= bar.birth : (bar.birth <= line && line < bar.death);
            if (alive) fv.values[static_cast<std::size_t>(v)] += 1.0;
        }
    }
    return fv;
}

/// Ten summary statistics of a barcode in fixed order:
/// [mean, std, median] of births, then deaths, then lifespans, then the bar
/// count. Standard deviations are sample standard deviations (n-1), defined
/// as 0 for fewer than two bars. Essential deaths are already clipped to the
/// filtration threshold. An empty barcode yields the zero vector.
inline FeatureVector barcode_stats(const PersistenceBarcode& barcode, int dim) {
    const auto& bars = detail::bars_of(barcode, dim);
    FeatureVector fv;
    fv.kind = dim == 0 ? FeatureKind::bs_d0 : FeatureKind::bs_d1;
    fv.values.assign(10, 0.0);
    if (bars.empty()) return fv;

    std::vector<double> births, deaths, lives;
    births.reserve(bars.size());
    deaths.reserve(bars.size());
    lives.reserve(bars.size());
    for (const Bar& bar : bars) {
        births.push_back(bar.birth);
        deaths.push_back(bar.death);
        lives.push_back(bar.death - bar.birth);
    }
    const auto fill = [&](std::size_t at, std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        const double sd = detail::sample_std(v, mean);
        std::sort(v.begin(), v.end());
        fv.values[at] = mean;
        fv.values[at + 1] = sd;
        fv.values[at + 2] = detail::median_of_sorted(v);
    };
    fill(0, births);
    fill(3, deaths);
    fill(6, lives);
    fv.values[9] = static_cast<double>(bars.size());
    return fv;
}

} // namespace mad
