#include <catch2/catch_amalgamated.hpp>

#include <bit>

#include "mad/random.hpp"
#include "mad/ulbp.hpp"

#include "support/oracles.hpp"
#include "support/textures.hpp"

using mad::GrayImage;
using mad::LbpConfig;
using mad::PointCloud;

namespace {

// TL T TR / L C R / BL B BR, matching the patch layout of lbp_code
GrayImage patch_image(std::initializer_list<std::uint8_t> v) {
    return GrayImage(3, 3, std::vector<std::uint8_t>(v));
}

} // namespace

TEST_CASE("lbp code of a constant patch is all ones (ties count as 1)") {
    std::array<std::array<std::uint8_t, 3>, 3> patch;
    for (auto& row : patch) row.fill(42);
    CHECK(mad::lbp_code(patch) == 0b11111111);
}

TEST_CASE("lbp code reads neighbors clockwise from the top-left, MSB first") {
    // TL=50 T=200 TR=200 / L=50 C=100 R=200 / BL=50 B=50 BR=200
    const std::array<std::array<std::uint8_t, 3>, 3> patch = {{
        {{50, 200, 200}},
        {{50, 100, 200}},
        {{50, 50, 200}},
    }};
    CHECK(mad::lbp_code(patch) == 0b01111000);
}

TEST_CASE("lbp code is zero when the center dominates") {
    std::array<std::array<std::uint8_t, 3>, 3> patch;
    for (auto& row : patch) row.fill(0);
    patch[1][1] = 255;
    CHECK(mad::lbp_code(patch) == 0b00000000);
}

TEST_CASE("circular transition counts") {
    CHECK(mad::circular_transitions(0b00000000) == 0);
    CHECK(mad::circular_transitions(0b11111111) == 0);
    CHECK(mad::circular_transitions(0b01111000) == 2);
    CHECK(mad::circular_transitions(0b01010101) == 8);
    CHECK(mad::is_uniform(0b01111000));
    CHECK_FALSE(mad::is_uniform(0b01010101));
}

TEST_CASE("all rotations of the target code have four ones and two transitions") {
    std::uint8_t code = 0b01111000;
    for (int i = 0; i < 8; ++i) {
        CHECK(std::popcount(code) == 4);
        CHECK(mad::circular_transitions(code) == 2);
        code = static_cast<std::uint8_t>((code << 1) | (code >> 7));
    }
}

TEST_CASE("constant images have no landmarks") {
    const GrayImage img(16, 16, 99);
    CHECK(mad::extract_landmarks(img).points.empty());
}

TEST_CASE("a single matching patch yields a single landmark") {
    const GrayImage img = patch_image({50, 200, 200, 50, 100, 200, 50, 50, 200});
    const PointCloud pc = mad::extract_landmarks(img);
    REQUIRE(pc.points.size() == 1);
    CHECK(pc.points[0] == mad::Point{1, 1});
    CHECK(pc.height == 3);
    CHECK(pc.width == 3);
}

TEST_CASE("landmark extraction rejects sub-3x3 images") {
    const GrayImage img(2, 5, 1);
    CHECK_THROWS_AS(mad::extract_landmarks(img), mad::Error);
}

TEST_CASE("extraction agrees with the naive per-pixel scan on random images") {
    mad::Rng rng(20240201);
    for (int trial = 0; trial < 25; ++trial) {
        const GrayImage img = testsupport::random_image(rng, 32, 32);
        const PointCloud pc = mad::extract_landmarks(img);
        const auto expected = testsupport::naive_landmark_scan(img, 0b01111000);
        CHECK(pc.points == expected);
    }
}

TEST_CASE("landmarks come out in raster order without duplicates or border hits") {
    mad::Rng rng(5);
    const GrayImage img = testsupport::random_image(rng, 40, 28);
    const PointCloud pc = mad::extract_landmarks(img);
    for (std::size_t i = 0; i < pc.points.size(); ++i) {
        const auto& p = pc.points[i];
        CHECK(p.row >= 1);
        CHECK(p.row <= img.height() - 2);
        CHECK(p.col >= 1);
        CHECK(p.col <= img.width() - 2);
        if (i > 0) CHECK(pc.points[i - 1] < p);
    }
}

TEST_CASE("adding a constant to all pixels leaves the landmark set unchanged") {
    mad::Rng rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const GrayImage img = testsupport::random_image(rng, 32, 32, 0, 245);
        GrayImage shifted = img;
        for (auto& p : shifted.pixels()) p = static_cast<std::uint8_t>(p + 10);
        CHECK(mad::extract_landmarks(img).points == mad::extract_landmarks(shifted).points);
    }
}

TEST_CASE("custom target codes are honored") {
    LbpConfig cfg;
    cfg.target_code = 0b00111100; // another rotation of the same geometry
    mad::Rng rng(9);
    const GrayImage img = testsupport::random_image(rng, 24, 24);
    const PointCloud pc = mad::extract_landmarks(img, cfg);
    CHECK(pc.points == testsupport::naive_landmark_scan(img, 0b00111100));
}
