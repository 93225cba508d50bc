#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mad/error.hpp"

namespace mad {

enum class FeatureKind { mciq, bb_d0, bb_d1, bs_d0, bs_d1 };
enum class Label { genuine, morph };

inline const char* to_string(FeatureKind k) {
    switch (k) {
        case FeatureKind::mciq: return "mciq";
        case FeatureKind::bb_d0: return "bb0";
        case FeatureKind::bb_d1: return "bb1";
        case FeatureKind::bs_d0: return "bs0";
        case FeatureKind::bs_d1: return "bs1";
    }
    return "?";
}

inline FeatureKind parse_kind(std::string_view s) {
    if (s == "mciq") return FeatureKind::mciq;
    if (s == "bb0") return FeatureKind::bb_d0;
    if (s == "bb1") return FeatureKind::bb_d1;
    if (s == "bs0") return FeatureKind::bs_d0;
    if (s == "bs1") return FeatureKind::bs_d1;
    fail(errc::parse_error, "unknown feature kind: " + std::string(s));
}

inline const char* to_string(Label l) { return l == Label::morph ? "morph" : "genuine"; }

inline Label parse_label(std::string_view s) {
    if (s == "genuine") return Label::genuine;
    if (s == "morph") return Label::morph;
    fail(errc::parse_error, "unknown label: " + std::string(s));
}

/// Vector length of each kind under the default extraction settings
/// (omega = 24 for barcode binning).
inline std::size_t default_feature_length(FeatureKind k) {
    switch (k) {
        case FeatureKind::mciq: return 50;
        case FeatureKind::bb_d0:
        case FeatureKind::bb_d1: return 25;
        case FeatureKind::bs_d0:
        case FeatureKind::bs_d1: return 10;
    }
    return 0;
}

struct FeatureVector {
    FeatureKind kind = FeatureKind::mciq;
    std::vector<double> values;
    std::string sample_id;
    Label label = Label::genuine;
};

namespace detail {

// shortest decimal form that round-trips the double exactly
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) fail(errc::io_error, "double formatting failed");
    return std::string(buf, ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        fail(errc::parse_error, "bad numeric field: " + std::string(s));
    return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

} // namespace detail

/// Shared feature CSV: header `sample_id,label,kind,v0,...,v{n-1}` where n is
/// the widest row in the file; rows of shorter kinds simply carry fewer value
/// fields. Values use the shortest round-trip decimal form.
inline void write_feature_csv(const std::filesystem::path& path,
                              const std::vector<FeatureVector>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot open for writing: " + path.string());
    std::size_t widest = 0;
    for (const auto& fv : rows) widest = std::max(widest, fv.values.size());
    out << "sample_id,label,kind";
    for (std::size_t i = 0; i < widest; ++i) out << ",v" << i;
    out << "\n";
    for (const auto& fv : rows) {
        out << fv.sample_id << ',' << to_string(fv.label) << ',' << to_string(fv.kind);
        for (double v : fv.values) out << ',' << detail::format_double(v);
        out << "\n";
    }
    if (!out) fail(errc::io_error, "short write: " + path.string());
}

inline std::vector<FeatureVector> read_feature_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::file_not_found, path.string());
    std::string line;
    if (!std::getline(in, line)) fail(errc::parse_error, "empty feature CSV: " + path.string());
    auto header = detail::split_csv_line(line);
    if (header.size() < 3 || header[0] != "sample_id" || header[1] != "label" ||
        header[2] != "kind")
        fail(errc::parse_error, "bad feature CSV header: " + path.string());
    std::vector<FeatureVector> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() < 4) fail(errc::parse_error, "short feature CSV row: " + path.string());
        FeatureVector fv;
        fv.sample_id = fields[0];
        fv.label = parse_label(fields[1]);
        fv.kind = parse_kind(fields[2]);
        fv.values.reserve(fields.size() - 3);
        for (std::size_t i = 3; i < fields.size(); ++i)
            fv.values.push_back(detail::parse_double(fields[i]));
        for (double v : fv.values)
            if (!std::isfinite(v)) fail(errc::non_finite_feature, "non-finite value in " + fv.sample_id);
        rows.push_back(std::move(fv));
    }
    return rows;
}

} // namespace mad
