#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mad/json_io.hpp"
#include "mad/random.hpp"
#include "mad/svm.hpp"

#include "support/textures.hpp"

using mad::FeatureKind;
using mad::FeatureVector;
using mad::Label;
using mad::SvmModel;
using mad::TrainConfig;

namespace {

FeatureVector sample(std::vector<double> values, Label label, std::string id = "s") {
    FeatureVector fv;
    fv.kind = FeatureKind::bs_d0;
    fv.values = std::move(values);
    fv.label = label;
    fv.sample_id = std::move(id);
    return fv;
}

/// 200 planar points labeled by the sign of x^3 - y, kept at least 0.1 away
/// from the decision surface so a cubic kernel can separate them exactly.
std::vector<FeatureVector> cubic_separable_dataset(std::uint64_t seed) {
    mad::Rng rng(seed);
    std::vector<FeatureVector> out;
    int made = 0;
    while (made < 200) {
        const double x = rng.uniform(-1.5, 1.5);
        const double y = rng.uniform(-2.0, 2.0);
        const double margin = x * x * x - y;
        if (std::fabs(margin) < 0.1) continue;
        out.push_back(sample({x, y}, margin > 0 ? Label::morph : Label::genuine,
                             "p" + std::to_string(made)));
        ++made;
    }
    return out;
}

} // namespace

TEST_CASE("cubic kernel values") {
    const std::vector<double> zero2 = {0.0, 0.0};
    CHECK(mad::poly_kernel(zero2, zero2) == 1.0);
    const std::vector<double> e1 = {1.0, 0.0};
    CHECK(mad::poly_kernel(e1, e1) == 8.0);
    const std::vector<double> u = {1.0, 2.0}, v = {3.0, -1.0};
    CHECK(mad::poly_kernel(u, v) == 8.0);
    const std::vector<double> w = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(mad::poly_kernel(u, w), mad::Error);

    const std::vector<double> a = {2.0}, b = {3.0};
    mad::KernelParams kp;
    kp.scale = 2.0;
    kp.offset = 0.5;
    CHECK(mad::poly_kernel(a, b, kp) == 42.875); // (0.5 + 6/2)^3
}

TEST_CASE("two distinct points train to a perfect two-vector model") {
    const std::vector<FeatureVector> data = {sample({0.0, 0.0}, Label::genuine, "g"),
                                             sample({1.0, 1.0}, Label::morph, "m")};
    const SvmModel model = mad::train_svm(data);
    CHECK(model.support_vectors.size() == 2);
    CHECK(mad::predict(model, data[0].values).label == Label::genuine);
    CHECK(mad::predict(model, data[1].values).label == Label::morph);
    double coef_sum = 0.0;
    for (double c : model.dual_coefs) coef_sum += c;
    CHECK(std::fabs(coef_sum) < 1e-9);
}

TEST_CASE("the cubic-separable dataset is fit exactly") {
    const auto data = cubic_separable_dataset(2024);
    TrainConfig cfg;
    cfg.C = 10.0;
    cfg.seed = 1;
    const SvmModel model = mad::train_svm(data, cfg);

    int correct = 0;
    for (const auto& fv : data)
        if (mad::predict(model, fv.values).label == fv.label) ++correct;
    CHECK(correct == 200);

    double coef_sum = 0.0;
    for (double c : model.dual_coefs) {
        coef_sum += c;
        CHECK(std::fabs(c) <= cfg.C + 1e-9);
    }
    CHECK(std::fabs(coef_sum) < 1e-9);

    // free support vectors sit on the margin within the stopping tolerance
    int free_checked = 0;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
        const double a = std::fabs(model.dual_coefs[i]);
        if (a < 1e-6 * cfg.C || a > cfg.C * (1.0 - 1e-6)) continue;
        const double y = model.dual_coefs[i] > 0 ? 1.0 : -1.0;
        const double score = mad::decision_score(model, model.support_vectors[i]);
        CHECK(std::fabs(y * score - 1.0) <= cfg.kkt_tolerance + 1e-9);
        ++free_checked;
    }
    CHECK(free_checked > 0);
}

TEST_CASE("single-class and non-finite inputs are rejected") {
    std::vector<FeatureVector> one_class = {sample({1.0}, Label::genuine),
                                            sample({2.0}, Label::genuine)};
    CHECK_THROWS_AS(mad::train_svm(one_class), mad::Error);

    std::vector<FeatureVector> bad = {sample({1.0}, Label::genuine),
                                      sample({std::nan("")}, Label::morph)};
    CHECK_THROWS_AS(mad::train_svm(bad), mad::Error);

    std::vector<FeatureVector> ragged = {sample({1.0}, Label::genuine),
                                         sample({1.0, 2.0}, Label::morph)};
    CHECK_THROWS_AS(mad::train_svm(ragged), mad::Error);
}

TEST_CASE("training is deterministic for a fixed seed") {
    mad::Rng rng(5);
    const auto data = testsupport::cluster_features(rng, 30, 4, 1.4);
    TrainConfig cfg;
    cfg.seed = 99;
    const auto a = mad::model_to_json(mad::train_svm(data, cfg)).dump();
    const auto b = mad::model_to_json(mad::train_svm(data, cfg)).dump();
    CHECK(a == b);
}

TEST_CASE("prediction does not depend on support-vector order") {
    mad::Rng rng(6);
    const auto data = testsupport::cluster_features(rng, 20, 3, 1.2);
    SvmModel model = mad::train_svm(data);
    REQUIRE(model.support_vectors.size() >= 2);
    const std::vector<double> probe = {0.3, -0.4, 0.9};
    const double before = mad::decision_score(model, probe);
    std::reverse(model.support_vectors.begin(), model.support_vectors.end());
    std::reverse(model.dual_coefs.begin(), model.dual_coefs.end());
    const double after = mad::decision_score(model, probe);
    CHECK(before == Catch::Approx(after).margin(1e-9));
}

TEST_CASE("a model without support vectors scores its bias") {
    SvmModel model;
    model.bias = -0.75;
    const std::vector<double> x = {1.0, 2.0};
    const auto pred = mad::predict(model, x);
    CHECK(pred.score == -0.75);
    CHECK(pred.label == Label::genuine);
    model.bias = 0.0; // tied score stays genuine
    CHECK(mad::predict(model, x).label == Label::genuine);
}

TEST_CASE("standardization is fitted, stored and applied") {
    mad::Rng rng(15);
    std::vector<FeatureVector> data;
    for (int i = 0; i < 40; ++i) {
        // coordinates on wildly different scales
        const bool morph = i % 2 == 0;
        const double c0 = (morph ? 5000.0 : 4000.0) + rng.uniform(-100.0, 100.0);
        const double c1 = (morph ? 0.02 : 0.01) + rng.uniform(-0.001, 0.001);
        data.push_back(sample({c0, c1}, morph ? Label::morph : Label::genuine,
                              "x" + std::to_string(i)));
    }
    TrainConfig cfg;
    cfg.standardize = true;
    const SvmModel model = mad::train_svm(data, cfg);
    REQUIRE(model.standardization.has_value());
    int correct = 0;
    for (const auto& fv : data)
        if (mad::predict(model, fv.values).label == fv.label) ++correct;
    CHECK(correct == 40);
}

TEST_CASE("model JSON round-trips bit-faithfully") {
    const auto data = cubic_separable_dataset(77);
    TrainConfig cfg;
    cfg.C = 10.0;
    const SvmModel model = mad::train_svm(data, cfg);
    const auto j = mad::model_to_json(model);
    const SvmModel back = mad::model_from_json(j);
    REQUIRE(back.support_vectors.size() == model.support_vectors.size());
    CHECK(back.bias == model.bias);
    for (std::size_t i = 0; i < model.dual_coefs.size(); ++i) {
        CHECK(back.dual_coefs[i] == model.dual_coefs[i]);
        CHECK(back.support_vectors[i] == model.support_vectors[i]);
    }
    CHECK(mad::model_to_json(back).dump() == j.dump());
}
