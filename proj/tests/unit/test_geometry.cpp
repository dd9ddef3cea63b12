#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fso/errors.hpp"
#include "fso/geometry.hpp"
#include "oracles.hpp"

using namespace fso::geometry;
using std::numbers::pi;

TEST_SUITE("geometry") {

TEST_CASE("direction_from_angles examples") {
    auto d = direction_from_angles({0.0, pi / 2});
    CHECK(d.x == doctest::Approx(1.0));
    CHECK(std::abs(d.y) < 1e-15);
    CHECK(std::abs(d.z) < 1e-15);

    d = direction_from_angles({1.234, 0.0});
    CHECK(d.x == 0.0);
    CHECK(d.y == 0.0);
    CHECK(d.z == 1.0);

    d = direction_from_angles({pi / 4, pi / 2});
    CHECK(d.x == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK(d.y == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK(std::abs(d.z) < 1e-15);
}

TEST_CASE("direction has unit norm and incidence angle matches arcsin |d.x|") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> th(0.0, 2 * pi), ph(1e-3, pi - 1e-3);
    for (int i = 0; i < 5000; ++i) {
        const Orientation o{th(gen), ph(gen)};
        const auto d = direction_from_angles(o);
        CHECK(std::abs(d.norm() - 1.0) <= 1e-15);
        if (std::abs(d.x) > 1e-6) CHECK(incidence_angle(o) == doctest::Approx(std::asin(std::abs(d.x))));
    }
}

TEST_CASE("incidence_angle examples and degeneracy") {
    CHECK(incidence_angle({0.0, pi / 2}) == doctest::Approx(pi / 2));
    CHECK(incidence_angle({pi, pi / 2}) == doctest::Approx(pi / 2));
    CHECK(incidence_angle({pi / 4, pi / 2}) == doctest::Approx(pi / 4));
    CHECK_THROWS_AS(incidence_angle({pi / 2, pi / 2}), fso::DegenerateGeometry);
    CHECK_THROWS_AS(incidence_angle({0.0, 0.0}), fso::DegenerateGeometry);
}

TEST_CASE("footprint_center examples") {
    auto f = footprint_center({{100, 0, 0}, {0.0, pi / 2}});
    CHECK(std::abs(f.fy) < 1e-12);
    CHECK(std::abs(f.fz) < 1e-12);

    f = footprint_center({{100, 3, 0}, {0.0, pi / 2}});
    CHECK(f.fy == doctest::Approx(3.0));
    CHECK(std::abs(f.fz) < 1e-12);

    const Pose p{{100, 0, 0}, {0.001, pi / 2}};
    f = footprint_center(p);
    CHECK(f.fy == doctest::Approx(-100 * std::tan(0.001)).epsilon(1e-14));
    CHECK(f.fy == doctest::Approx(-0.100).epsilon(1e-3));
    CHECK(std::abs(f.fz) < 1e-12);
    const auto g = fso::oracles::footprint_by_intersection(p);
    CHECK(f.fy == doctest::Approx(g.fy).epsilon(1e-12));
}

TEST_CASE("footprint_center agrees with the line-plane intersection") {
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const Pose p{{(u(gen) < 0.5 ? -1 : 1) * (10 + 1000 * u(gen)), 50 * (u(gen) - 0.5), 50 * (u(gen) - 0.5)},
                     {2 * pi * u(gen), 0.1 + (pi - 0.2) * u(gen)}};
        if (std::abs(std::cos(p.orientation.theta)) < 0.05) continue;
        const auto f = footprint_center(p);
        const auto g = fso::oracles::footprint_by_intersection(p);
        const double scale = std::abs(p.position.rx) + std::abs(f.fy) + std::abs(f.fz);
        CHECK(std::abs(f.fy - g.fy) <= 1e-12 * scale);
        CHECK(std::abs(f.fz - g.fz) <= 1e-12 * scale);
    }
}

TEST_CASE("footprint_center is affine in ry, rz with unit slope") {
    const Orientation o{0.2, 1.9};
    const auto base = footprint_center({{700, 1, 2}, o});
    for (double delta : {-3.0, 0.25, 10.0}) {
        const auto fy = footprint_center({{700, 1 + delta, 2}, o});
        const auto fz = footprint_center({{700, 1, 2 + delta}, o});
        CHECK(fy.fy - base.fy == doctest::Approx(delta).epsilon(1e-12));
        CHECK(fy.fz == base.fz);
        CHECK(fz.fz - base.fz == doctest::Approx(delta).epsilon(1e-12));
        CHECK(fz.fy == base.fy);
    }
}

TEST_CASE("footprint_center degeneracy") {
    CHECK_THROWS_AS(footprint_center({{100, 0, 0}, {pi / 2, pi / 2}}), fso::DegenerateGeometry);
    CHECK_THROWS_AS(footprint_center({{100, 0, 0}, {0.0, 0.0}}), fso::DegenerateGeometry);
}

TEST_CASE("tracking_orientation examples") {
    auto o = tracking_orientation({1000, 0, 0});
    CHECK(o.theta == doctest::Approx(0.0));
    CHECK(o.phi == doctest::Approx(pi / 2));
    o = tracking_orientation({-1000, 0, 0});
    CHECK(o.theta == doctest::Approx(pi));
    CHECK(o.phi == doctest::Approx(pi / 2));
    CHECK_THROWS_AS(tracking_orientation({0, 10, 0}), fso::DegenerateGeometry);
}

TEST_CASE("tracking round trip puts the footprint on the detector center") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        const double alpha = 2 * pi * u(gen);
        if (std::abs(std::cos(alpha)) < 0.02) continue;
        const auto mu = spherical_mean_position(50 + 5000 * u(gen), alpha, 0.2 + (pi - 0.4) * u(gen));
        const auto o = tracking_orientation(mu);
        CHECK(o.theta >= 0.0);
        CHECK(o.theta < 2 * pi);
        CHECK(footprint_center({mu, o}).offset() <= 1e-9);
    }
}

TEST_CASE("spherical_mean_position") {
    auto p = spherical_mean_position(1000, 0, pi / 2);
    CHECK(p.rx == doctest::Approx(1000));
    CHECK(std::abs(p.ry) < 1e-12);
    CHECK(std::abs(p.rz) < 1e-10);
    p = spherical_mean_position(1000, pi / 8, 5 * pi / 8);
    CHECK(p.rx == doctest::Approx(1000 * std::sin(5 * pi / 8) * std::cos(pi / 8)));
    CHECK(p.ry == doctest::Approx(1000 * std::sin(5 * pi / 8) * std::sin(pi / 8)));
    CHECK(p.rz == doctest::Approx(1000 * std::cos(5 * pi / 8)));
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        CHECK(spherical_mean_position(123.0, u(gen), u(gen)).norm() == doctest::Approx(123.0));
    }
}

TEST_CASE("wrap_angle") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(-0.1) == doctest::Approx(2 * pi - 0.1));
    CHECK(wrap_angle(2 * pi + 0.3) == doctest::Approx(0.3));
    CHECK(wrap_angle(-1e-20) < 2 * pi);
}

}  // TEST_SUITE
