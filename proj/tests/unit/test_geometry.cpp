#include <doctest.h>

#include <cmath>
#include <set>

#include "spectrade/errors.hpp"
#include "spectrade/geometry.hpp"
#include "spectrade/rng.hpp"

using namespace spectrade;
using namespace spectrade::geometry;

namespace {

double angle_of(double center_to_sat, double to_sat, double to_center, double radius) {
    CellGeometry cell;
    cell.center_to_sat_km = center_to_sat;
    UserPosition user;
    user.to_sat_km = to_sat;
    user.to_center_km = to_center;
    return deviation_angle(cell, user, EarthModel{radius});
}

} // namespace

TEST_CASE("deviation angle is zero at the cell center") {
    CHECK(angle_of(36000.0, 36000.0, 0.0, 6371.0) == 0.0);
    RandomStream rng = named_stream(11, "geom.center");
    for (int i = 0; i < 200; ++i) {
        double d = rng.next_range(100.0, 1e5);
        CHECK(angle_of(d, d, 0.0, 6371.0) == 0.0);
    }
}

TEST_CASE("flat-earth limit matches the planar law of cosines") {
    // oracle: planar triangle with sides a, b and opposite side c
    double a = 36000.0, b = 36010.0, c = 500.0;
    double planar = std::acos((a * a + b * b - c * c) / (2.0 * a * b));
    CHECK(planar == doctest::Approx(0.013884294130111481).epsilon(1e-12));
    double spherical = angle_of(a, b, c, 1e9);
    CHECK(std::abs(spherical - planar) < 1e-6);
}

TEST_CASE("spherical case agrees with an independent chord evaluation") {
    // chord oracle: 2 R sin(arc / 2R) feeding the planar law of cosines
    double R = 6371.0, a = 36000.0, b = 36000.0, arc = 100.0;
    double chord = 2.0 * R * std::sin(arc / (2.0 * R));
    double oracle = std::acos((a * a + b * b - chord * chord) / (2.0 * a * b));
    double got = angle_of(a, b, arc, R);
    CHECK(got == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(got == doctest::Approx(0.0027777501560843757).epsilon(1e-12));
}

TEST_CASE("deviation angle is symmetric in the two slant ranges") {
    RandomStream rng = named_stream(12, "geom.sym");
    for (int i = 0; i < 200; ++i) {
        // draw a consistent triangle: the two slant ranges may differ by at
        // most the ground chord
        double a = rng.next_range(30000.0, 40000.0);
        double arc = rng.next_range(1.0, 2000.0);
        double chord = 2.0 * 6371.0 * std::sin(arc / (2.0 * 6371.0));
        double b = a + chord * rng.next_range(-0.9, 0.9);
        CHECK(angle_of(a, b, arc, 6371.0) == angle_of(b, a, arc, 6371.0));
    }
}

TEST_CASE("deviation angle is continuous in the ground distance") {
    double delta = 1e-6;
    for (double arc : {10.0, 100.0, 500.0, 2000.0}) {
        double t0 = angle_of(36000.0, 36005.0, arc, 6371.0);
        double t1 = angle_of(36000.0, 36005.0, arc + delta, 6371.0);
        CHECK(std::abs(t1 - t0) < 1e-6);
    }
}

TEST_CASE("impossible geometry raises a domain error") {
    // user claims to be 30000 km from a center that is 36000 km from the
    // satellite while sitting 1 km away on the ground
    CHECK_THROWS_AS(angle_of(36000.0, 30000.0, 1.0, 6371.0), DomainError);
    CHECK_THROWS_AS(angle_of(-1.0, 36000.0, 0.0, 6371.0), DomainError);
    CHECK_THROWS_AS(angle_of(36000.0, 36000.0, -5.0, 6371.0), DomainError);
}

TEST_CASE("slant range at the subsatellite point equals the altitude") {
    CHECK(slant_range_km(0.0, 35786.0, 6371.0) == doctest::Approx(35786.0).epsilon(1e-12));
    CHECK(slant_range_km(500.0, 35786.0, 6371.0) > 35786.0);
}

TEST_CASE("footprint: single cell") {
    auto cells = build_footprint({1, 3, 35786.0, 500.0, 6371.0}, 0);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].center_to_sat_km == doctest::Approx(35786.0));
    CHECK(co_channel_cells(cells, 0).empty());
}

TEST_CASE("footprint: reuse 7 on 7 cells gives all distinct colors") {
    auto cells = build_footprint({7, 7, 35786.0, 500.0, 6371.0}, 3);
    std::set<int> colors;
    for (const auto& c : cells) colors.insert(c.reuse_color);
    CHECK(colors.size() == 7);
    for (const auto& c : cells) CHECK(co_channel_cells(cells, c.cell_id).empty());
}

TEST_CASE("footprint: reuse 1 makes every pair co-channel") {
    auto cells = build_footprint({7, 1, 35786.0, 500.0, 6371.0}, 0);
    CHECK(co_channel_cells(cells, 0).size() == 6);
    for (const auto& c : cells) {
        CHECK(co_channel_cells(cells, c.cell_id).size() == 6);
    }
}

TEST_CASE("co-channel relation is symmetric and irreflexive") {
    for (int reuse : {1, 3, 4, 7}) {
        auto cells = build_footprint({19, reuse, 35786.0, 500.0, 6371.0}, 5);
        for (const auto& a : cells) {
            CHECK_FALSE(cells_co_channel(a, a));
            for (const auto& b : cells) {
                CHECK(cells_co_channel(a, b) == cells_co_channel(b, a));
            }
        }
    }
}

TEST_CASE("adjacent cells never share a color for reuse >= 3") {
    for (int reuse : {3, 4, 7}) {
        auto cells = build_footprint({37, reuse, 35786.0, 500.0, 6371.0}, 1);
        for (const auto& a : cells) {
            for (const auto& b : cells) {
                if (a.cell_id == b.cell_id) continue;
                double dist = std::hypot(a.center.x_km - b.center.x_km,
                                         a.center.y_km - b.center.y_km);
                if (dist < 500.0 * 1.01) { // lattice neighbors
                    CHECK(a.reuse_color != b.reuse_color);
                }
            }
        }
    }
}

TEST_CASE("footprint is deterministic and the seed only rotates colors") {
    auto a = build_footprint({19, 3, 35786.0, 500.0, 6371.0}, 9);
    auto b = build_footprint({19, 3, 35786.0, 500.0, 6371.0}, 9);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].reuse_color == b[i].reuse_color);
        CHECK(a[i].center_to_sat_km == b[i].center_to_sat_km);
    }
    auto c = build_footprint({19, 3, 35786.0, 500.0, 6371.0}, 10);
    int shift = (c[0].reuse_color - a[0].reuse_color + 3) % 3;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(c[i].reuse_color == (a[i].reuse_color + shift) % 3);
    }
}

TEST_CASE("unsupported reuse factor is a config error") {
    CHECK_THROWS_AS(build_footprint({7, 5, 35786.0, 500.0, 6371.0}, 0), ConfigError);
    CHECK_THROWS_AS(build_footprint({0, 3, 35786.0, 500.0, 6371.0}, 0), ConfigError);
}

TEST_CASE("footprint serializes to config cell lines") {
    auto cells = build_footprint({3, 3, 35786.0, 500.0, 6371.0}, 0);
    std::string text = serialize_footprint(cells);
    CHECK(text.find("cell = 0 ") != std::string::npos);
    CHECK(text.find("cell = 2 ") != std::string::npos);
}
