// Command-line front end: feature extraction over image datasets, synthetic
// morph generation, barcode/landmark dumps, SVM training and the two
// evaluation protocols.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mad/eval.hpp"
#include "mad/feature.hpp"
#include "mad/image.hpp"
#include "mad/json_io.hpp"
#include "mad/mciq.hpp"
#include "mad/pipeline.hpp"
#include "mad/persistence.hpp"
#include "mad/rips_oracle.hpp"
#include "mad/svm.hpp"
#include "mad/ulbp.hpp"

#include "svg.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<mad::FeatureKind> parse_kinds(const std::string& csv) {
    std::vector<mad::FeatureKind> kinds;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) kinds.push_back(mad::parse_kind(tok));
    }
    if (kinds.empty()) mad::fail(mad::errc::invalid_config, "no feature kinds requested");
    return kinds;
}

bool has_image_extension(const fs::path& p) {
    auto ext = p.extension().string();
    for (auto& ch : ext) ch = static_cast<char>(std::tolower(ch));
    return ext == ".pgm" || ext == ".png";
}

struct Sample {
    fs::path path;
    std::string sample_id;
    mad::Label label;
};

std::vector<Sample> collect_dataset(const fs::path& root, const fs::path& manifest) {
    std::vector<Sample> samples;
    for (const auto& [sub, label] :
         {std::pair{fs::path("genuine"), mad::Label::genuine},
          std::pair{fs::path("morph"), mad::Label::morph}}) {
        const fs::path dir = root / sub;
        if (!fs::is_directory(dir))
            mad::fail(mad::errc::file_not_found, "dataset subdirectory missing: " + dir.string());
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file() && has_image_extension(entry.path()))
                samples.push_back({entry.path(), entry.path().stem().string(), label});
        }
    }
    if (!manifest.empty()) {
        std::map<std::string, mad::Label> overrides;
        std::ifstream in(manifest);
        if (!in) mad::fail(mad::errc::file_not_found, manifest.string());
        std::string line;
        std::getline(in, line); // header: sample_id,label
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos)
                mad::fail(mad::errc::parse_error, "bad manifest row: " + line);
            std::string value = line.substr(comma + 1);
            if (!value.empty() && value.back() == '\r') value.pop_back();
            overrides[line.substr(0, comma)] = mad::parse_label(value);
        }
        for (auto& s : samples) {
            auto it = overrides.find(s.sample_id);
            if (it != overrides.end()) s.label = it->second;
        }
    }
    std::sort(samples.begin(), samples.end(),
              [](const Sample& a, const Sample& b) { return a.sample_id < b.sample_id; });
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].sample_id == samples[i - 1].sample_id)
            mad::fail(mad::errc::invalid_config, "duplicate sample id: " + samples[i].sample_id);
    }
    return samples;
}

int cmd_extract(const fs::path& root, const std::string& kinds_csv, const fs::path& out,
                const fs::path& manifest, double threshold, int omega, unsigned jobs) {
    const auto kinds = parse_kinds(kinds_csv);
    const auto samples = collect_dataset(root, manifest);
    if (samples.empty()) mad::fail(mad::errc::invalid_config, "dataset has no images");

    mad::PipelineConfig cfg;
    cfg.threshold = threshold;
    cfg.omega = omega;

    struct Slot {
        std::vector<mad::FeatureVector> rows;
        std::string error;
    };
    std::vector<Slot> slots(samples.size());
    std::atomic<std::size_t> next{0};
    const unsigned n_workers =
        std::max(1u, std::min(jobs ? jobs : std::thread::hardware_concurrency(),
                              static_cast<unsigned>(samples.size())));
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= samples.size()) return;
            try {
                const mad::GrayImage img = mad::load_grayscale(samples[i].path);
                slots[i].rows = mad::extract_features(img, kinds, cfg, samples[i].sample_id,
                                                      samples[i].label);
            } catch (const std::exception& e) {
                slots[i].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::vector<mad::FeatureVector> rows;
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!slots[i].error.empty()) {
            ++skipped;
            std::cerr << "skipping " << samples[i].path.string() << ": " << slots[i].error << "\n";
            continue;
        }
        for (auto& fv : slots[i].rows) rows.push_back(std::move(fv));
    }
    mad::write_feature_csv(out, rows);
    std::cout << "wrote " << rows.size() << " feature rows for " << samples.size() - skipped
              << " images to " << out.string() << "\n";
    if (skipped > 0) {
        std::cerr << skipped << " image(s) skipped\n";
        return 1;
    }
    return 0;
}

int cmd_landmarks(const fs::path& image, const fs::path& out) {
    const mad::GrayImage img =
        mad::resize_bilinear(mad::load_grayscale(image), mad::kCanonicalHeight, mad::kCanonicalWidth);
    const mad::PointCloud pc = mad::extract_landmarks(img);
    std::ofstream os(out, std::ios::binary);
    if (!os) mad::fail(mad::errc::io_error, "cannot open for writing: " + out.string());
    os << "row,col\n";
    for (const auto& p : pc.points) os << p.row << ',' << p.col << "\n";
    std::cout << pc.points.size() << " landmarks -> " << out.string() << "\n";
    return 0;
}

mad::PointCloud load_point_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) mad::fail(mad::errc::file_not_found, path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("row,col", 0) != 0)
        mad::fail(mad::errc::parse_error, "expected 'row,col' header: " + path.string());
    mad::PointCloud pc;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            mad::fail(mad::errc::parse_error, "bad point row: " + line);
        mad::Point p;
        p.row = std::stoi(line.substr(0, comma));
        p.col = std::stoi(line.substr(comma + 1));
        pc.points.push_back(p);
        pc.height = std::max(pc.height, p.row + 2);
        pc.width = std::max(pc.width, p.col + 2);
    }
    return pc;
}

int cmd_barcode(const fs::path& image, const fs::path& points, const fs::path& out,
                double threshold) {
    mad::PointCloud pc;
    if (!points.empty()) {
        pc = load_point_csv(points);
    } else {
        const mad::GrayImage img = mad::resize_bilinear(mad::load_grayscale(image),
                                                        mad::kCanonicalHeight, mad::kCanonicalWidth);
        pc = mad::extract_landmarks(img);
    }
    mad::FiltrationParams params;
    params.threshold = threshold;
    mad::PersistenceBarcode barcode;
    barcode.threshold = threshold;
    if (!pc.points.empty()) barcode = mad::vr_barcode(pc, params);
    mad::write_json(out, mad::barcode_to_json(barcode));
    std::cout << barcode.dim0.size() << " dim0 bars, " << barcode.dim1.size() << " dim1 bars -> "
              << out.string() << "\n";
    return 0;
}

int cmd_matrices(const fs::path& image, const std::string& prefix) {
    const mad::GrayImage img =
        mad::resize_bilinear(mad::load_grayscale(image), mad::kCanonicalHeight, mad::kCanonicalWidth);
    const auto mats = mad::mciq_index_matrices(img);
    static const char* names[5] = {"correlation", "luminance", "contrast", "kurtosis", "skewness"};
    for (std::size_t k = 0; k < 5; ++k) {
        const fs::path path = prefix + std::string(names[k]) + ".csv";
        std::ofstream os(path, std::ios::binary);
        if (!os) mad::fail(mad::errc::io_error, "cannot open for writing: " + path.string());
        for (int r = 0; r < mad::kBlockCount; ++r) {
            for (int c = 0; c < mad::kBlockCount; ++c) {
                if (c) os << ',';
                os << mad::detail::format_double(mats[k][static_cast<std::size_t>(r) * 36 + c]);
            }
            os << "\n";
        }
    }
    std::cout << "wrote 5 36x36 index matrices with prefix " << prefix << "\n";
    return 0;
}

int cmd_synth_morph(const fs::path& a, const fs::path& b, double alpha, const fs::path& out) {
    const mad::GrayImage ia =
        mad::resize_bilinear(mad::load_grayscale(a), mad::kCanonicalHeight, mad::kCanonicalWidth);
    const mad::GrayImage ib =
        mad::resize_bilinear(mad::load_grayscale(b), mad::kCanonicalHeight, mad::kCanonicalWidth);
    mad::save_image(mad::blend(ia, ib, alpha), out);
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

fs::path sibling_csv(const fs::path& svg_path) {
    fs::path p = svg_path;
    p.replace_extension(".csv");
    return p;
}

void plot_barcode(const mad::PersistenceBarcode& barcode, const fs::path& out) {
    const double width = 640, panel_h = 180, margin = 45;
    madtool::SvgCanvas svg(width, 2 * panel_h + 40);
    const double x_scale = (width - 2 * margin) / barcode.threshold;
    const auto draw_panel = [&](const std::vector<mad::Bar>& bars, double top,
                                const std::string& title, const std::string& color) {
        const double axis_y = top + panel_h - 30;
        svg.text(margin, top + 14, title, 12);
        svg.line(margin, axis_y, width - margin, axis_y, "black");
        for (int t = 0; t <= static_cast<int>(barcode.threshold); t += 5) {
            const double x = margin + t * x_scale;
            svg.line(x, axis_y, x, axis_y + 4, "black");
            svg.text(x, axis_y + 15, std::to_string(t), 9, "middle");
        }
        const double lane_h =
            bars.empty() ? 0.0 : (axis_y - top - 20) / static_cast<double>(bars.size());
        for (std::size_t i = 0; i < bars.size(); ++i) {
            const double y = top + 20 + (static_cast<double>(i) + 0.5) * lane_h;
            const double x1 = margin + bars[i].birth * x_scale;
            const double x2 = margin + bars[i].death * x_scale;
            svg.line(x1, y, x2, y, bars[i].essential ? "firebrick" : color, 2.0);
        }
    };
    draw_panel(barcode.dim0, 10, "dimension 0", "steelblue");
    draw_panel(barcode.dim1, panel_h + 30, "dimension 1", "seagreen");
    svg.save(out);

    std::ofstream csv(sibling_csv(out), std::ios::binary);
    if (!csv) mad::fail(mad::errc::io_error, "cannot write " + sibling_csv(out).string());
    csv << "dim,birth,death,essential\n";
    for (const auto& b : barcode.dim0)
        csv << "0," << mad::detail::format_double(b.birth) << ','
            << mad::detail::format_double(b.death) << ',' << (b.essential ? 1 : 0) << "\n";
    for (const auto& b : barcode.dim1)
        csv << "1," << mad::detail::format_double(b.birth) << ','
            << mad::detail::format_double(b.death) << ',' << (b.essential ? 1 : 0) << "\n";
}

void plot_bb_curves(const std::vector<mad::FeatureVector>& rows, const fs::path& out) {
    const double width = 640, height = 360, margin = 45;
    madtool::SvgCanvas svg(width, height);
    double y_max = 1.0;
    for (const auto& fv : rows)
        for (double v : fv.values) y_max = std::max(y_max, v);
    const std::size_t lines = rows.front().values.size();
    const double x_step = (width - 2 * margin) / static_cast<double>(lines - 1);
    const double y_scale = (height - 2 * margin) / y_max;
    svg.line(margin, height - margin, width - margin, height - margin, "black");
    svg.line(margin, margin, margin, height - margin, "black");
    static const char* palette[8] = {"steelblue", "seagreen",  "firebrick", "darkorange",
                                     "purple",    "goldenrod", "teal",      "gray"};
    const std::size_t shown = std::min<std::size_t>(rows.size(), 8);
    for (std::size_t s = 0; s < shown; ++s) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t v = 0; v < lines; ++v) {
            const double x0 = margin + static_cast<double>(v) * x_step;
            const double y = height - margin - rows[s].values[v] * y_scale;
            if (v > 0) pts.emplace_back(x0, pts.back().second); // step profile
            pts.emplace_back(x0, y);
        }
        svg.polyline(pts, palette[s % 8]);
        svg.text(width - margin + 2, margin + 12.0 * static_cast<double>(s) + 10, rows[s].sample_id, 8);
    }
    svg.text(width / 2, height - 8, "filtration line", 10, "middle");
    svg.save(out);
}

void plot_mciq_hist(const mad::FeatureVector& fv, const fs::path& out) {
    const double panel_w = 128, height = 260, margin = 40, base = height - 40;
    madtool::SvgCanvas svg(panel_w * 5 + 2 * margin, height);
    static const char* names[5] = {"correlation", "luminance", "contrast", "kurtosis", "skewness"};
    double y_max = 1.0;
    for (double v : fv.values) y_max = std::max(y_max, v);
    const double y_scale = (base - 40) / y_max;
    for (std::size_t k = 0; k < 5; ++k) {
        const double x0 = margin + static_cast<double>(k) * panel_w;
        svg.text(x0 + panel_w / 2 - 10, 20, names[k], 10, "middle");
        svg.line(x0, base, x0 + panel_w - 16, base, "black");
        for (std::size_t bin = 0; bin < 10; ++bin) {
            const double v = fv.values[k * 10 + bin];
            const double bar_w = (panel_w - 16) / 10.0;
            svg.rect(x0 + static_cast<double>(bin) * bar_w, base - v * y_scale, bar_w - 1,
                     v * y_scale, "steelblue");
        }
    }
    svg.save(out);
}

void plot_bs_bars(const mad::FeatureVector& fv, const fs::path& out) {
    const double width = 480, height = 280, margin = 45, base = height - 60;
    madtool::SvgCanvas svg(width, height);
    double y_max = 1.0;
    for (double v : fv.values) y_max = std::max(y_max, v);
    const double bar_w = (width - 2 * margin) / 10.0;
    static const char* names[10] = {"b_mean", "b_std", "b_med", "d_mean", "d_std",
                                    "d_med",  "l_mean", "l_std", "l_med", "count"};
    svg.line(margin, base, width - margin, base, "black");
    for (std::size_t i = 0; i < 10; ++i) {
        const double h = fv.values[i] / y_max * (base - 40);
        svg.rect(margin + static_cast<double>(i) * bar_w, base - h, bar_w - 2, h, "seagreen");
        svg.text(margin + static_cast<double>(i) * bar_w + bar_w / 2, base + 12, names[i], 7,
                 "middle");
    }
    svg.save(out);
}

int cmd_plot(const fs::path& input, const fs::path& out) {
    auto ext = input.extension().string();
    for (auto& ch : ext) ch = static_cast<char>(std::tolower(ch));
    if (ext == ".json") {
        const auto barcode = mad::barcode_from_json(mad::read_json(input));
        plot_barcode(barcode, out);
    } else if (ext == ".csv") {
        const auto rows = mad::read_feature_csv(input);
        if (rows.empty()) mad::fail(mad::errc::parse_error, "no feature rows in " + input.string());
        switch (rows.front().kind) {
            case mad::FeatureKind::mciq: plot_mciq_hist(rows.front(), out); break;
            case mad::FeatureKind::bb_d0:
            case mad::FeatureKind::bb_d1: plot_bb_curves(rows, out); break;
            case mad::FeatureKind::bs_d0:
            case mad::FeatureKind::bs_d1: plot_bs_bars(rows.front(), out); break;
        }
        // numeric companion: echo the plotted rows
        const std::size_t shown =
            rows.front().kind == mad::FeatureKind::mciq ||
                    rows.front().kind == mad::FeatureKind::bs_d0 ||
                    rows.front().kind == mad::FeatureKind::bs_d1
                ? 1
                : std::min<std::size_t>(rows.size(), 8);
        mad::write_feature_csv(sibling_csv(out),
                               std::vector<mad::FeatureVector>(rows.begin(),
                                                               rows.begin() + static_cast<std::ptrdiff_t>(shown)));
    } else {
        mad::fail(mad::errc::unsupported_format, "plot input must be .json or .csv");
    }
    std::cout << "wrote " << out.string() << " and " << sibling_csv(out).string() << "\n";
    return 0;
}

mad::LabeledDataset dataset_from_csv(const fs::path& path, const std::string& kind,
                                     const std::string& db_name) {
    auto rows = mad::read_feature_csv(path);
    const mad::FeatureKind want = mad::parse_kind(kind);
    std::vector<mad::FeatureVector> filtered;
    for (auto& fv : rows)
        if (fv.kind == want) filtered.push_back(std::move(fv));
    if (filtered.empty())
        mad::fail(mad::errc::kind_mismatch,
                  "no rows of kind " + kind + " in " + path.string());
    return mad::make_dataset(std::move(filtered),
                             db_name.empty() ? path.stem().string() : db_name);
}

int cmd_train(const fs::path& features, const std::string& kind, const fs::path& out,
              const mad::TrainConfig& cfg) {
    auto rows = mad::read_feature_csv(features);
    const mad::FeatureKind want = mad::parse_kind(kind);
    std::vector<mad::FeatureVector> filtered;
    for (auto& fv : rows)
        if (fv.kind == want) filtered.push_back(std::move(fv));
    const mad::SvmModel model = mad::train_svm(filtered, cfg);
    mad::write_json(out, mad::model_to_json(model));
    std::cout << "trained on " << filtered.size() << " samples, " << model.support_vectors.size()
              << " support vectors -> " << out.string() << "\n";
    return 0;
}

int cmd_predict(const fs::path& model_path, const fs::path& features, const std::string& kind,
                const fs::path& out) {
    const mad::SvmModel model = mad::model_from_json(mad::read_json(model_path));
    auto rows = mad::read_feature_csv(features);
    const mad::FeatureKind want = kind.empty() ? model.kind : mad::parse_kind(kind);
    if (want != model.kind)
        mad::fail(mad::errc::kind_mismatch, "model was trained on kind " +
                                                std::string(mad::to_string(model.kind)));
    std::ofstream os(out, std::ios::binary);
    if (!os) mad::fail(mad::errc::io_error, "cannot open for writing: " + out.string());
    os << "sample_id,label,predicted,score\n";
    for (const auto& fv : rows) {
        if (fv.kind != want) continue;
        const mad::Prediction p = mad::predict(model, fv.values);
        os << fv.sample_id << ',' << mad::to_string(fv.label) << ',' << mad::to_string(p.label)
           << ',' << mad::detail::format_double(p.score) << "\n";
    }
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

int cmd_crossval(const fs::path& features, const std::string& kinds_csv, const fs::path& out,
                 const mad::TrainConfig& cfg, int repeats, std::uint64_t seed,
                 const std::string& db_name) {
    std::vector<mad::EvalReport> reports;
    std::stringstream ss(kinds_csv);
    std::string kind;
    while (std::getline(ss, kind, ',')) {
        if (kind.empty()) continue;
        const auto ds = dataset_from_csv(features, kind, db_name);
        reports.push_back(mad::five_fold_cv(ds, cfg, repeats, seed));
    }
    if (reports.empty()) mad::fail(mad::errc::invalid_config, "no feature kinds requested");
    mad::json j = mad::json::array();
    for (const auto& r : reports) j.push_back(mad::report_to_json(r));
    mad::write_json(out, j);
    std::cout << mad::format_fivefold_table(reports);
    std::cout << "report -> " << out.string() << "\n";
    return 0;
}

int cmd_crossdb(const fs::path& train_features, const fs::path& test_features,
                const std::string& kind, const fs::path& out, const mad::TrainConfig& cfg,
                int repeats, std::uint64_t seed, const std::string& train_db,
                const std::string& test_db) {
    const auto train_ds = dataset_from_csv(train_features, kind, train_db);
    const auto test_ds = dataset_from_csv(test_features, kind, test_db);
    const mad::EvalReport report = mad::cross_db(train_ds, test_ds, cfg, repeats, seed);
    mad::write_json(out, mad::json::array({mad::report_to_json(report)}));
    std::cout << mad::format_crossdb_table(std::span(&report, 1));
    std::cout << "report -> " << out.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"morph detection via quality histograms and texture-landmark persistence"};
    app.require_subcommand(1);

    // extract
    std::string ds_root, kinds = "mciq,bb0,bb1,bs0,bs1", manifest;
    std::string out_path;
    double threshold = 25.0;
    int omega = 24;
    unsigned jobs = 0;
    auto* extract = app.add_subcommand("extract", "extract feature vectors from a dataset");
    extract->add_option("--dataset", ds_root, "directory with genuine/ and morph/ subdirs")
        ->required();
    extract->add_option("--kinds", kinds, "comma list from {mciq,bb0,bb1,bs0,bs1}");
    extract->add_option("--out", out_path, "output feature CSV")->required();
    extract->add_option("--manifest", manifest, "optional CSV (sample_id,label) overriding labels");
    extract->add_option("--threshold", threshold, "filtration cap");
    extract->add_option("--omega", omega, "last Betti-binning line");
    extract->add_option("--jobs", jobs, "worker threads (default: hardware)");

    // landmarks
    std::string image_path, points_path;
    auto* landmarks = app.add_subcommand("landmarks", "dump ULBP landmark point cloud as CSV");
    landmarks->add_option("--image", image_path, "input image")->required();
    landmarks->add_option("--out", out_path, "output CSV")->required();

    // barcode
    auto* barcode = app.add_subcommand("barcode", "compute a persistence barcode as JSON");
    barcode->add_option("--image", image_path, "input image");
    barcode->add_option("--points", points_path, "input point-cloud CSV (row,col)");
    barcode->add_option("--out", out_path, "output JSON")->required();
    barcode->add_option("--threshold", threshold, "filtration cap");

    // matrices
    std::string prefix;
    auto* matrices = app.add_subcommand("matrices", "dump the five 36x36 MCIQ index matrices");
    matrices->add_option("--image", image_path, "input image")->required();
    matrices->add_option("--out-prefix", prefix, "output path prefix")->required();

    // synth-morph
    std::string path_a, path_b;
    double alpha = 0.5;
    auto* synth = app.add_subcommand("synth-morph",
                                     "alpha-blend two images into a simple synthetic morph "
                                     "(test data generator, not a production morph pipeline)");
    synth->add_option("--a", path_a, "first image")->required();
    synth->add_option("--b", path_b, "second image")->required();
    synth->add_option("--alpha", alpha, "blend weight of the first image");
    synth->add_option("--out", out_path, "output image (.pgm or .png)")->required();

    // plot
    std::string plot_input;
    auto* plot = app.add_subcommand("plot", "render a barcode JSON or feature CSV as SVG + CSV");
    plot->add_option("--input", plot_input, "barcode .json or feature .csv")->required();
    plot->add_option("--out", out_path, "output SVG (a CSV twin is written next to it)")
        ->required();

    // shared training knobs
    mad::TrainConfig tc;
    std::uint64_t seed = 0;
    int repeats = 10;

    // train
    std::string features_path, kind = "mciq";
    auto* train = app.add_subcommand("train", "train a cubic-kernel SVM from a feature CSV");
    train->add_option("--features", features_path, "feature CSV")->required();
    train->add_option("--kind", kind, "feature kind to train on");
    train->add_option("--out", out_path, "output model JSON")->required();
    train->add_option("--C", tc.C, "box constraint");
    train->add_option("--seed", seed, "RNG seed");
    train->add_flag("--standardize", tc.standardize, "z-score features on the training set");

    // predict
    std::string model_path, predict_kind;
    auto* pred = app.add_subcommand("predict", "apply a trained model to a feature CSV");
    pred->add_option("--model", model_path, "model JSON")->required();
    pred->add_option("--features", features_path, "feature CSV")->required();
    pred->add_option("--kind", predict_kind, "feature kind (default: the model's)");
    pred->add_option("--out", out_path, "output predictions CSV")->required();

    // crossval
    std::string db_name;
    auto* crossval = app.add_subcommand("crossval", "repeated balanced 5-fold cross-validation");
    crossval->add_option("--features", features_path, "feature CSV")->required();
    crossval->add_option("--kinds", kinds, "comma list of kinds to evaluate")->required();
    crossval->add_option("--out", out_path, "output report JSON")->required();
    crossval->add_option("--repeats", repeats, "balanced subsample draws");
    crossval->add_option("--seed", seed, "RNG seed");
    crossval->add_option("--C", tc.C, "box constraint");
    crossval->add_flag("--standardize", tc.standardize, "z-score features per training fold");
    crossval->add_option("--db-name", db_name, "database name for the report");

    // crossdb
    std::string train_features, test_features, train_db, test_db;
    auto* crossdb = app.add_subcommand("crossdb", "train on one database, test on another");
    crossdb->add_option("--train-features", train_features, "training feature CSV")->required();
    crossdb->add_option("--test-features", test_features, "test feature CSV")->required();
    crossdb->add_option("--kind", kind, "feature kind");
    crossdb->add_option("--out", out_path, "output report JSON")->required();
    crossdb->add_option("--repeats", repeats, "test subsample draws");
    crossdb->add_option("--seed", seed, "RNG seed");
    crossdb->add_option("--C", tc.C, "box constraint");
    crossdb->add_flag("--standardize", tc.standardize, "z-score features per training fold");
    crossdb->add_option("--train-db", train_db, "training database name");
    crossdb->add_option("--test-db", test_db, "test database name");

    CLI11_PARSE(app, argc, argv);

    try {
        tc.seed = seed;
        if (extract->parsed())
            return cmd_extract(ds_root, kinds, out_path, manifest, threshold, omega, jobs);
        if (landmarks->parsed()) return cmd_landmarks(image_path, out_path);
        if (barcode->parsed()) {
            if (image_path.empty() == points_path.empty())
                mad::fail(mad::errc::invalid_config, "give exactly one of --image or --points");
            return cmd_barcode(image_path, points_path, out_path, threshold);
        }
        if (matrices->parsed()) return cmd_matrices(image_path, prefix);
        if (synth->parsed()) return cmd_synth_morph(path_a, path_b, alpha, out_path);
        if (plot->parsed()) return cmd_plot(plot_input, out_path);
        if (train->parsed()) return cmd_train(features_path, kind, out_path, tc);
        if (pred->parsed()) return cmd_predict(model_path, features_path, predict_kind, out_path);
        if (crossval->parsed())
            return cmd_crossval(features_path, kinds, out_path, tc, repeats, seed, db_name);
        if (crossdb->parsed())
            return cmd_crossdb(train_features, test_features, kind, out_path, tc, repeats, seed,
                               train_db, test_db);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
