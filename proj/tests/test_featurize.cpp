#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mad/featurize.hpp"
#include "mad/pipeline.hpp"
#include "mad/random.hpp"
#include "mad/ulbp.hpp"

#include "support/textures.hpp"

using mad::Bar;
using mad::BettiBinningConfig;
using mad::FeatureKind;
using mad::PersistenceBarcode;

namespace {

PersistenceBarcode barcode_with(std::vector<Bar> dim0, std::vector<Bar> dim1,
                                double threshold = 25.0) {
    PersistenceBarcode bc;
    bc.threshold = threshold;
    bc.dim0 = std::move(dim0);
    bc.dim1 = std::move(dim1);
    return bc;
}

} // namespace

TEST_CASE("betti binning counts bars alive at each integer line") {
    const auto bc = barcode_with({{0.0, 25.0, true}, {0.0, 3.5, false}}, {});
    const auto fv = mad::betti_binning(bc, 0);
    REQUIRE(fv.values.size() == 25);
    CHECK(fv.kind == FeatureKind::bb_d0);
    for (int v = 0; v <= 3; ++v) CHECK(fv.values[static_cast<std::size_t>(v)] == 2.0);
    for (int v = 4; v <= 24; ++v) CHECK(fv.values[static_cast<std::size_t>(v)] == 1.0);
}

TEST_CASE("an empty barcode bins to zeros") {
    const auto bc = barcode_with({}, {});
    const auto bb = mad::betti_binning(bc, 1);
    REQUIRE(bb.values.size() == 25);
    for (double v : bb.values) CHECK(v == 0.0);
    const auto bs = mad::barcode_stats(bc, 1);
    REQUIRE(bs.values.size() == 10);
    for (double v : bs.values) CHECK(v == 0.0);
}

TEST_CASE("bars are half-open: a bar dying at a line is not counted there") {
    const auto bc = barcode_with({}, {{2.0, 4.0, false}});
    const auto fv = mad::betti_binning(bc, 1);
    CHECK(fv.values[1] == 0.0);
    CHECK(fv.values[2] == 1.0);
    CHECK(fv.values[3] == 1.0);
    CHECK(fv.values[4] == 0.0);
}

TEST_CASE("essential bars count at every line from their birth onward") {
    // threshold below omega: the essential bar still counts past its clip value
    const auto bc = barcode_with({}, {{3.0, 10.0, true}}, 10.0);
    const auto fv = mad::betti_binning(bc, 1);
    for (int v = 0; v < 3; ++v) CHECK(fv.values[static_cast<std::size_t>(v)] == 0.0);
    for (int v = 3; v <= 24; ++v) CHECK(fv.values[static_cast<std::size_t>(v)] == 1.0);
}

TEST_CASE("omega controls the vector length") {
    const auto bc = barcode_with({{0.0, 2.0, false}}, {});
    BettiBinningConfig cfg;
    cfg.omega = 4;
    CHECK(mad::betti_binning(bc, 0, cfg).values.size() == 5);
    cfg.omega = 0;
    CHECK_THROWS_AS(mad::betti_binning(bc, 0, cfg), mad::Error);
}

TEST_CASE("dim0 binning starts at the landmark count and never increases") {
    mad::Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const auto img = testsupport::random_image(rng, 32, 32);
        const auto pc = mad::extract_landmarks(img);
        mad::FeatureVector fv;
        if (pc.points.empty()) {
            fv.values.assign(25, 0.0);
        } else {
            fv = mad::betti_binning(mad::vr_barcode(pc), 0);
        }
        CHECK(fv.values[0] == static_cast<double>(pc.points.size()));
        for (std::size_t v = 1; v < fv.values.size(); ++v)
            CHECK(fv.values[v] <= fv.values[v - 1]);
    }
}

TEST_CASE("barcode statistics of a single bar") {
    const auto bc = barcode_with({}, {{0.0, 5.0, false}});
    const auto fv = mad::barcode_stats(bc, 1);
    CHECK(fv.kind == FeatureKind::bs_d1);
    const std::vector<double> expected = {0, 0, 0, 5, 0, 5, 5, 0, 5, 1};
    REQUIRE(fv.values.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(fv.values[i] == expected[i]);
}

TEST_CASE("barcode statistics of the two-bar example") {
    const auto bc = barcode_with({{0.0, 2.0, false}, {0.0, 4.0, false}}, {});
    const auto fv = mad::barcode_stats(bc, 0);
    const double r2 = std::sqrt(2.0);
    const std::vector<double> expected = {0, 0, 0, 3, r2, 3, 3, r2, 3, 2};
    REQUIRE(fv.values.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(fv.values[i] == Catch::Approx(expected[i]).margin(1e-12));
}

TEST_CASE("dim0 birth statistics are structurally zero") {
    mad::Rng rng(7);
    const auto pc = testsupport::random_cloud(rng, 30, 25, 25);
    const auto fv = mad::barcode_stats(mad::vr_barcode(pc), 0);
    CHECK(fv.values[0] == 0.0);
    CHECK(fv.values[1] == 0.0);
    CHECK(fv.values[2] == 0.0);
    CHECK(fv.values[9] == 30.0);
}

TEST_CASE("median of an even count is the mean of the middle pair") {
    const auto bc =
        barcode_with({}, {{1.0, 2.0, false}, {1.0, 3.0, false}, {1.0, 7.0, false}, {1.0, 8.0, false}});
    const auto fv = mad::barcode_stats(bc, 1);
    CHECK(fv.values[5] == 5.0); // deaths 2,3,7,8 -> (3+7)/2
}

TEST_CASE("featurizations ignore bar order") {
    mad::Rng rng(11);
    auto bc = barcode_with({}, {{1.0, 4.0, false}, {2.0, 9.0, false}, {0.0, 25.0, true}});
    auto shuffled = bc;
    std::swap(shuffled.dim1[0], shuffled.dim1[2]);
    std::swap(shuffled.dim1[1], shuffled.dim1[2]);
    const auto a_bb = mad::betti_binning(bc, 1), b_bb = mad::betti_binning(shuffled, 1);
    CHECK(a_bb.values == b_bb.values);
    const auto a_bs = mad::barcode_stats(bc, 1), b_bs = mad::barcode_stats(shuffled, 1);
    for (std::size_t i = 0; i < a_bs.values.size(); ++i)
        CHECK(a_bs.values[i] == Catch::Approx(b_bs.values[i]).margin(1e-12));
}

TEST_CASE("bar count matches between the two featurizations") {
    mad::Rng rng(3);
    const auto pc = testsupport::random_cloud(rng, 20, 15, 15);
    const auto bc = mad::vr_barcode(pc);
    const auto bb = mad::betti_binning(bc, 0);
    const auto bs = mad::barcode_stats(bc, 0);
    CHECK(bs.values[9] == bb.values[0]); // every dim0 bar is born at 0
}

TEST_CASE("invalid dimension is rejected") {
    const auto bc = barcode_with({}, {});
    CHECK_THROWS_AS(mad::betti_binning(bc, 2), mad::Error);
    CHECK_THROWS_AS(mad::barcode_stats(bc, -1), mad::Error);
}

TEST_CASE("a landmark-free image flows through the pipeline as zero vectors") {
    const mad::GrayImage flat(40, 40, 128); // constant: every LBP code is 0xff
    const std::vector<mad::FeatureKind> kinds = {
        mad::FeatureKind::bb_d0, mad::FeatureKind::bs_d1, mad::FeatureKind::mciq};
    const auto rows = mad::extract_features(flat, kinds, {}, "flat", mad::Label::genuine);
    REQUIRE(rows.size() == 3);
    REQUIRE(rows[0].values.size() == 25);
    for (double v : rows[0].values) CHECK(v == 0.0);
    REQUIRE(rows[1].values.size() == 10);
    for (double v : rows[1].values) CHECK(v == 0.0);
    CHECK(rows[2].values.size() == 50);
    CHECK(rows[0].sample_id == "flat");
    CHECK(rows[2].label == mad::Label::genuine);
}
