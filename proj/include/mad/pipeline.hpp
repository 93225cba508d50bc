#pragma once

#include <span>
#include <string>
#include <vector>

#include "mad/featurize.hpp"
#include "mad/image.hpp"
#include "mad/mciq.hpp"
#include "mad/persistence.hpp"
#include "mad/ulbp.hpp"

namespace mad {

struct PipelineConfig {
    double threshold = 25.0; // filtration cap
    int omega = 24;          // last Betti-binning line
    LbpConfig lbp{};
};

/// Run the requested feature extractors on one image: normalize to the
/// canonical 280x270 size, then compute MCIQ and/or the persistence-based
/// vectors. The barcode is computed once and shared by all four
/// persistence kinds. An image without landmarks yields all-zero
/// persistence features rather than an error, so degenerate inputs still
/// flow through classification.
inline std::vector<FeatureVector> extract_features(const GrayImage& raw,
                                                   std::span<const FeatureKind> kinds,
                                                   const PipelineConfig& cfg, std::string sample_id,
                                                   Label label) {
    const GrayImage img = resize_bilinear(raw, kCanonicalHeight, kCanonicalWidth);

    bool want_barcode = false;
    bool want_dim1 = false;
    for (FeatureKind k : kinds) {
        if (k != FeatureKind::mciq) want_barcode = true;
        if (k == FeatureKind::bb_d1 || k == FeatureKind::bs_d1) want_dim1 = true;
    }

    PersistenceBarcode barcode;
    bool have_barcode = false;
    if (want_barcode) {
        const PointCloud pc = extract_landmarks(img, cfg.lbp);
        if (!pc.points.empty()) {
            FiltrationParams params;
            params.max_dim = want_dim1 ? 1 : 0;
            params.threshold = cfg.threshold;
            barcode = vr_barcode(pc, params);
            have_barcode = true;
        }
    }

    const BettiBinningConfig bb_cfg{cfg.omega};
    std::vector<FeatureVector> out;
    out.reserve(kinds.size());
    for (FeatureKind k : kinds) {
        FeatureVector fv;
        switch (k) {
            case FeatureKind::mciq:
                fv = mciq_vector(img);
                break;
            case FeatureKind::bb_d0:
            case FeatureKind::bb_d1: {
                const int dim = k == FeatureKind::bb_d0 ? 0 : 1;
                if (have_barcode) {
                    fv = betti_binning(barcode, dim, bb_cfg);
                } else {
                    fv.kind = k;
                    fv.values.assign(static_cast<std::size_t>(cfg.omega) + 1, 0.0);
                }
                break;
            }
            case FeatureKind::bs_d0:
            case FeatureKind::bs_d1: {
                const int dim = k == FeatureKind::bs_d0 ? 0 : 1;
                if (have_barcode) {
                    fv = barcode_stats(barcode, dim);
                } else {
                    fv.kind = k;
                    fv.values.assign(10, 0.0);
                }
                break;
            }
        }
        fv.sample_id = sample_id;
        fv.label = label;
        out.push_back(std::move(fv));
    }
    return out;
}

} // namespace mad
