#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "mad/error.hpp"
#include "mad/feature.hpp"
#include "mad/random.hpp"
#include "mad/svm.hpp"

namespace mad {

/// A two-class feature dataset with consistent kind and vector length.
struct LabeledDataset {
    std::vector<FeatureVector> genuine;
    std::vector<FeatureVector> morph;
    std::string db_name;
    FeatureKind kind = FeatureKind::mciq;
};

inline LabeledDataset make_dataset(std::vector<FeatureVector> rows, std::string db_name) {
    if (rows.empty()) fail(errc::missing_class, "dataset is empty");
    LabeledDataset ds;
    ds.db_name = std::move(db_name);
    ds.kind = rows[0].kind;
    const std::size_t dim = rows[0].values.size();
    for (auto& fv : rows) {
        if (fv.kind != ds.kind) fail(errc::kind_mismatch, "mixed feature kinds in dataset");
        if (fv.values.size() != dim)
            fail(errc::dimension_mismatch, "mixed feature lengths in dataset");
        (fv.label == Label::morph ? ds.morph : ds.genuine).push_back(std::move(fv));
    }
    return ds;
}

/// Confusion counts with morph as the positive class.
struct ConfusionCounts {
    long tp = 0; // morph predicted morph
    long tn = 0; // genuine predicted genuine
    long fp = 0; // genuine predicted morph (a false rejection)
    long fn = 0; // morph predicted genuine (a false acceptance)

    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        tn += o.tn;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
    double frr() const { return 100.0 * static_cast<double>(fp) / static_cast<double>(fp + tn); }
    double far() const { return 100.0 * static_cast<double>(fn) / static_cast<double>(fn + tp); }
};

struct RunRecord {
    int run = 0;
    ConfusionCounts counts;
};

enum class Protocol { fcv5, crossdb };

inline const char* to_string(Protocol p) { return p == Protocol::fcv5 ? "5fcv" : "crossdb"; }

/// Error rates over repeated runs. frr_std is absent for the cross-database
/// protocol, where the genuine test set is identical across repeats.
struct EvalReport {
    Protocol protocol = Protocol::fcv5;
    std::uint64_t seed = 0;
    FeatureKind kind = FeatureKind::mciq;
    std::string train_db;
    std::string test_db;
    double frr_avg = 0.0;
    std::optional<double> frr_std;
    double far_avg = 0.0;
    double far_std = 0.0;
    std::vector<RunRecord> per_run;
};

/// FRR = % of genuine samples predicted morph; FAR = % of morph samples
/// predicted genuine.
inline std::pair<double, double> frr_far(const std::vector<Label>& predictions,
                                         const std::vector<Label>& truth) {
    if (predictions.size() != truth.size())
        fail(errc::size_mismatch, "predictions and truth differ in length");
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == Label::genuine) {
            (predictions[i] == Label::morph ? c.fp : c.tn) += 1;
        } else {
            (predictions[i] == Label::genuine ? c.fn : c.tp) += 1;
        }
    }
    if (c.fp + c.tn == 0 || c.fn + c.tp == 0)
        fail(errc::missing_class, "truth must contain both classes");
    return {c.frr(), c.far()};
}

/// Keep every genuine sample and draw |genuine| morphs uniformly without
/// replacement. Selected morphs keep their original relative order.
inline LabeledDataset balanced_subsample(const LabeledDataset& ds, std::uint64_t seed) {
    if (ds.morph.size() < ds.genuine.size())
        fail(errc::too_few_morphs, "need at least as many morphs as genuine samples");
    LabeledDataset out;
    out.db_name = ds.db_name;
    out.kind = ds.kind;
    out.genuine = ds.genuine;
    Rng rng(seed);
    const auto idx = rng.sample_without_replacement(ds.morph.size(), ds.genuine.size());
    out.morph.reserve(idx.size());
    for (std::size_t i : idx) out.morph.push_back(ds.morph[i]);
    return out;
}

namespace detail {

/// Stratified assignment into k folds: each class is shuffled and dealt
/// round-robin, so per-fold class counts differ by at most one.
inline std::vector<std::vector<std::size_t>> stratified_folds(std::size_t count, int k, Rng& rng) {
    std::vector<std::size_t> idx(count);
    for (std::size_t i = 0; i < count; ++i) idx[i] = i;
    rng.shuffle(idx);
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < count; ++i)
        folds[i % static_cast<std::size_t>(k)].push_back(idx[i]);
    return folds;
}

inline ConfusionCounts score_samples(const SvmModel& model,
                                     std::span<const FeatureVector> samples) {
    ConfusionCounts c;
    for (const auto& fv : samples) {
        const Label got = predict(model, fv.values).label;
        if (fv.label == Label::genuine) {
            (got == Label::morph ? c.fp : c.tn) += 1;
        } else {
            (got == Label::genuine ? c.fn : c.tp) += 1;
        }
    }
    return c;
}

struct FoldModel {
    SvmModel model;
    ConfusionCounts val_counts;
    int run = 0;
    int fold = 0;
};

struct FiveFoldOutcome {
    EvalReport report;
    std::vector<FoldModel> fold_models;
};

inline void finalize_rates(EvalReport& report, bool with_frr_std) {
    std::vector<double> frrs, fars;
    for (const auto& rec : report.per_run) {
        frrs.push_back(rec.counts.frr());
        fars.push_back(rec.counts.far());
    }
    const auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    const auto sample_std = [&](const std::vector<double>& v, double mu) {
        if (v.size() <= 1) return 0.0;
        double s = 0.0;
        for (double x : v) s += (x - mu) * (x - mu);
        return std::sqrt(s / static_cast<double>(v.size() - 1));
    };
    report.frr_avg = mean(frrs);
    report.far_avg = mean(fars);
    report.far_std = sample_std(fars, report.far_avg);
    if (with_frr_std) {
        report.frr_std = sample_std(frrs, report.frr_avg);
    } else {
        report.frr_std.reset();
    }
}

inline FiveFoldOutcome run_five_fold(const LabeledDataset& ds, const TrainConfig& cfg, int repeats,
                                     std::uint64_t seed, bool keep_models) {
    if (repeats < 1) fail(errc::invalid_config, "repeats must be at least 1");
    if (ds.genuine.size() < 5 || ds.morph.size() < 5)
        fail(errc::invalid_config, "5-fold cross-validation needs at least 5 samples per class");

    constexpr int k = 5;
    FiveFoldOutcome out;
    out.report.protocol = Protocol::fcv5;
    out.report.seed = seed;
    out.report.kind = ds.kind;
    out.report.train_db = ds.db_name;
    out.report.test_db = ds.db_name;

    for (int run = 0; run < repeats; ++run) {
        const LabeledDataset bal =
            balanced_subsample(ds, mix_seed(seed, static_cast<std::uint64_t>(run), 1));
        Rng fold_rng(mix_seed(seed, static_cast<std::uint64_t>(run), 2));
        const auto g_folds = stratified_folds(bal.genuine.size(), k, fold_rng);
        const auto m_folds = stratified_folds(bal.morph.size(), k, fold_rng);

        ConfusionCounts run_counts;
        for (int fold = 0; fold < k; ++fold) {
            std::vector<FeatureVector> train;
            std::vector<FeatureVector> val;
            for (int f = 0; f < k; ++f) {
                auto& dst = f == fold ? val : train;
                for (std::size_t i : g_folds[static_cast<std::size_t>(f)])
                    dst.push_back(bal.genuine[i]);
                for (std::size_t i : m_folds[static_cast<std::size_t>(f)])
                    dst.push_back(bal.morph[i]);
            }
            TrainConfig fold_cfg = cfg;
            fold_cfg.seed = mix_seed(seed, static_cast<std::uint64_t>(run),
                                     3 + static_cast<std::uint64_t>(fold));
            SvmModel model = train_svm(train, fold_cfg);
            const ConfusionCounts counts = score_samples(model, val);
            run_counts += counts;
            if (keep_models) out.fold_models.push_back({std::move(model), counts, run, fold});
        }
        out.report.per_run.push_back({run, run_counts});
    }
    finalize_rates(out.report, /*with_frr_std=*/true);
    return out;
}

} // namespace detail

/// The repeated, class-balanced 5-fold protocol: each run draws a fresh
/// balanced morph subsample, splits it into stratified folds, pools the five
/// held-out confusion counts, and the report averages the per-run rates.
inline EvalReport five_fold_cv(const LabeledDataset& ds, const TrainConfig& cfg, int repeats = 10,
                               std::uint64_t seed = 0) {
    return detail::run_five_fold(ds, cfg, repeats, seed, /*keep_models=*/false).report;
}

/// Cross-database generalization: run the 5-fold protocol on the training
/// database, keep the fold model with the lowest validation FRR+FAR (ties:
/// lower FAR, then lower run, then lower fold), and evaluate that single
/// model on the test database with `repeats` re-drawn balanced morph
/// subsamples. The genuine test set is fixed, so no FRR spread is reported.
inline EvalReport cross_db(const LabeledDataset& train_ds, const LabeledDataset& test_ds,
                           const TrainConfig& cfg, int repeats = 10, std::uint64_t seed = 0) {
    if (train_ds.kind != test_ds.kind)
        fail(errc::kind_mismatch, "train and test datasets carry different feature kinds");
    const std::size_t train_dim =
        train_ds.genuine.empty() ? 0 : train_ds.genuine[0].values.size();
    const std::size_t test_dim = test_ds.genuine.empty() ? 0 : test_ds.genuine[0].values.size();
    if (train_dim != test_dim)
        fail(errc::kind_mismatch, "train and test feature lengths differ");

    auto fcv = detail::run_five_fold(train_ds, cfg, repeats, mix_seed(seed, 0x7a, 0), true);
    const detail::FoldModel* best = nullptr;
    for (const auto& fm : fcv.fold_models) {
        if (best == nullptr) {
            best = &fm;
            continue;
        }
        const double cand = fm.val_counts.frr() + fm.val_counts.far();
        const double cur = best->val_counts.frr() + best->val_counts.far();
        if (cand < cur ||
            (cand == cur && fm.val_counts.far() < best->val_counts.far())) {
            best = &fm; // run/fold order already ascending, so later ties lose
        }
    }

    EvalReport report;
    report.protocol = Protocol::crossdb;
    report.seed = seed;
    report.kind = train_ds.kind;
    report.train_db = train_ds.db_name;
    report.test_db = test_ds.db_name;
    for (int rep = 0; rep < repeats; ++rep) {
        const LabeledDataset bal =
            balanced_subsample(test_ds, mix_seed(seed, 0x7e57, static_cast<std::uint64_t>(rep)));
        ConfusionCounts counts = detail::score_samples(best->model, bal.genuine);
        counts += detail::score_samples(best->model, bal.morph);
        report.per_run.push_back({rep, counts});
    }
    detail::finalize_rates(report, /*with_frr_std=*/false);
    return report;
}

namespace detail {

inline std::string rate_cell(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
}

inline std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

} // namespace detail

/// Aligned text table for one or more 5-fold reports, one column per report.
inline std::string format_fivefold_table(std::span<const EvalReport> reports) {
    using detail::pad;
    using detail::rate_cell;
    std::ostringstream os;
    os << pad("Error", 7) << pad("Stats.", 7);
    for (const auto& r : reports) os << pad(to_string(r.kind), 8);
    os << '\n';
    os << pad("FRR", 7) << pad("Avg", 7);
    for (const auto& r : reports) os << pad(rate_cell(r.frr_avg), 8);
    os << '\n' << pad("", 7) << pad("Stdev", 7);
    for (const auto& r : reports) os << pad(r.frr_std ? rate_cell(*r.frr_std) : "---", 8);
    os << '\n' << pad("FAR", 7) << pad("Avg", 7);
    for (const auto& r : reports) os << pad(rate_cell(r.far_avg), 8);
    os << '\n' << pad("", 7) << pad("Stdev", 7);
    for (const auto& r : reports) os << pad(rate_cell(r.far_std), 8);
    os << '\n';
    return os.str();
}

/// Aligned text table for cross-database reports, two rows per report.
inline std::string format_crossdb_table(std::span<const EvalReport> reports) {
    using detail::pad;
    using detail::rate_cell;
    std::size_t db_width = 9;
    for (const auto& r : reports)
        db_width = std::max({db_width, r.train_db.size() + 2, r.test_db.size() + 2});
    std::ostringstream os;
    os << pad("Features", 10) << pad("Training", db_width) << pad("Testing", db_width)
       << pad("Stats", 7) << pad("FRR", 8) << "FAR\n";
    for (const auto& r : reports) {
        os << pad(to_string(r.kind), 10) << pad(r.train_db, db_width) << pad(r.test_db, db_width)
           << pad("Avg", 7) << pad(rate_cell(r.frr_avg), 8) << rate_cell(r.far_avg) << '\n';
        os << pad("", 10) << pad("", db_width) << pad("", db_width) << pad("Stdev", 7)
           << pad(r.frr_std ? rate_cell(*r.frr_std) : "---", 8) << rate_cell(r.far_std) << '\n';
    }
    return os.str();
}

} // namespace mad
