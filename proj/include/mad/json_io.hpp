#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "mad/error.hpp"
#include "mad/eval.hpp"
#include "mad/persistence.hpp"
#include "mad/svm.hpp"

namespace mad {

// nlohmann emits the shortest decimal form that round-trips each double, so
// serialized reals survive a save/load cycle bit-exactly.
using json = nlohmann::ordered_json;

inline json barcode_to_json(const PersistenceBarcode& barcode) {
    json j;
    j["threshold"] = barcode.threshold;
    const auto dump_bars = [](const std::vector<Bar>& bars) {
        json arr = json::array();
        for (const Bar& b : bars) arr.push_back({b.birth, b.death, b.essential});
        return arr;
    };
    j["dim0"] = dump_bars(barcode.dim0);
    j["dim1"] = dump_bars(barcode.dim1);
    return j;
}

inline PersistenceBarcode barcode_from_json(const json& j) {
    try {
        PersistenceBarcode barcode;
        barcode.threshold = j.at("threshold").get<double>();
        const auto load_bars = [](const json& arr) {
            std::vector<Bar> bars;
            for (const auto& e : arr)
                bars.push_back({e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<bool>()});
            return bars;
        };
        barcode.dim0 = load_bars(j.at("dim0"));
        barcode.dim1 = load_bars(j.at("dim1"));
        return barcode;
    } catch (const json::exception& e) {
        fail(errc::parse_error, std::string("bad barcode JSON: ") + e.what());
    }
}

inline json model_to_json(const SvmModel& model) {
    json j;
    j["kind"] = to_string(model.kind);
    j["kernel"] = {{"degree", model.kernel.degree},
                   {"scale", model.kernel.scale},
                   {"offset", model.kernel.offset}};
    j["bias"] = model.bias;
    j["dual_coefs"] = model.dual_coefs;
    j["support_vectors"] = model.support_vectors;
    if (model.standardization) {
        j["standardization"] = {{"mean", model.standardization->mean},
                                {"stddev", model.standardization->stddev}};
    } else {
        j["standardization"] = nullptr;
    }
    j["label_map"] = {{"+1", "morph"}, {"-1", "genuine"}};
    return j;
}

inline SvmModel model_from_json(const json& j) {
    try {
        SvmModel model;
        model.kind = parse_kind(j.at("kind").get<std::string>());
        const auto& k = j.at("kernel");
        model.kernel.degree = k.at("degree").get<int>();
        model.kernel.scale = k.at("scale").get<double>();
        model.kernel.offset = k.at("offset").get<double>();
        model.bias = j.at("bias").get<double>();
        model.dual_coefs = j.at("dual_coefs").get<std::vector<double>>();
        model.support_vectors = j.at("support_vectors").get<std::vector<std::vector<double>>>();
        if (!j.at("standardization").is_null()) {
            Standardization st;
            st.mean = j.at("standardization").at("mean").get<std::vector<double>>();
            st.stddev = j.at("standardization").at("stddev").get<std::vector<double>>();
            model.standardization = std::move(st);
        }
        if (model.dual_coefs.size() != model.support_vectors.size())
            fail(errc::parse_error, "dual_coefs and support_vectors differ in length");
        return model;
    } catch (const json::exception& e) {
        fail(errc::parse_error, std::string("bad model JSON: ") + e.what());
    }
}

inline json report_to_json(const EvalReport& report) {
    json j;
    j["protocol"] = to_string(report.protocol);
    j["seed"] = report.seed;
    j["kind"] = to_string(report.kind);
    j["train_db"] = report.train_db;
    j["test_db"] = report.test_db;
    j["frr_avg"] = report.frr_avg;
    if (report.frr_std) {
        j["frr_std"] = *report.frr_std;
    } else {
        j["frr_std"] = nullptr;
    }
    j["far_avg"] = report.far_avg;
    j["far_std"] = report.far_std;
    json runs = json::array();
    for (const auto& rec : report.per_run) {
        runs.push_back({{"run", rec.run},
                        {"tp", rec.counts.tp},
                        {"tn", rec.counts.tn},
                        {"fp", rec.counts.fp},
                        {"fn", rec.counts.fn}});
    }
    j["per_run"] = runs;
    return j;
}

inline EvalReport report_from_json(const json& j) {
    try {
        EvalReport report;
        const auto protocol = j.at("protocol").get<std::string>();
        if (protocol == "5fcv") {
            report.protocol = Protocol::fcv5;
        } else if (protocol == "crossdb") {
            report.protocol = Protocol::crossdb;
        } else {
            fail(errc::parse_error, "unknown protocol: " + protocol);
        }
        report.seed = j.at("seed").get<std::uint64_t>();
        report.kind = parse_kind(j.at("kind").get<std::string>());
        report.train_db = j.at("train_db").get<std::string>();
        report.test_db = j.at("test_db").get<std::string>();
        report.frr_avg = j.at("frr_avg").get<double>();
        if (!j.at("frr_std").is_null()) report.frr_std = j.at("frr_std").get<double>();
        report.far_avg = j.at("far_avg").get<double>();
        report.far_std = j.at("far_std").get<double>();
        for (const auto& rec : j.at("per_run")) {
            RunRecord r;
            r.run = rec.at("run").get<int>();
            r.counts.tp = rec.at("tp").get<long>();
            r.counts.tn = rec.at("tn").get<long>();
            r.counts.fp = rec.at("fp").get<long>();
            r.counts.fn = rec.at("fn").get<long>();
            report.per_run.push_back(r);
        }
        return report;
    } catch (const json::exception& e) {
        fail(errc::parse_error, std::string("bad report JSON: ") + e.what());
    }
}

inline void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) fail(errc::io_error, "short write: " + path.string());
}

inline json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::file_not_found, path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) fail(errc::parse_error, "invalid JSON: " + path.string());
    return j;
}

} // namespace mad
