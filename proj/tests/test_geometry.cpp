#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ringlaser/error.hpp"
#include "ringlaser/geometry.hpp"

using namespace ringlaser;

TEST_SUITE("geometry") {

TEST_CASE("hexagon radius equals spacing") {
    const AtomArray a = build_ring_with_center(6, 0.37);
    CHECK(a.ring_radius() == doctest::Approx(0.37).epsilon(1e-14));
}

TEST_CASE("square radius is spacing over sqrt 2") {
    const AtomArray a = build_ring_with_center(4, 0.5);
    CHECK(a.ring_radius() == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(ring_radius_for(4, 0.5) == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("bad inputs") {
    CHECK_THROWS_AS(build_ring_with_center(2, 0.5), Error);
    try {
        build_ring_with_center(2, 0.5);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_geometry);
    }
    try {
        build_ring_with_center(5, 0.0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_parameter);
    }
    try {
        build_ring_with_center(5, -0.1);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_parameter);
    }
}

TEST_CASE("ring invariants") {
    for (std::size_t n = 3; n <= 12; ++n) {
        for (double d : {0.1, 0.5, 1.2}) {
            const AtomArray a = build_ring_with_center(n, d);
            REQUIRE(a.atom_count() == n + 1);
            REQUIRE(a.dipoles.size() == n + 1);
            CHECK(a.ring_count == n);
            CHECK(a.center_index == n);
            const double r = ring_radius_for(n, d);
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(std::abs(a.positions[i].norm() - r) < 1e-12);
                CHECK(std::abs(a.positions[i].z()) < 1e-15);
                const Vec3& p = a.positions[i];
                const Vec3& q = a.positions[(i + 1) % n];
                const double angle = std::acos(std::clamp(p.dot(q) / (r * r), -1.0, 1.0));
                CHECK(std::abs(angle - 2.0 * pi / static_cast<double>(n)) < 1e-12);
                CHECK(std::abs((p - q).norm() - d) < 1e-12);
            }
            CHECK(a.positions[n].norm() == 0.0);
            for (const Vec3& mu : a.dipoles) {
                CHECK(std::abs(mu.norm() - 1.0) < 1e-12);
                CHECK(mu.z() == doctest::Approx(1.0));
            }
            // atom 0 on the +x axis
            CHECK(a.positions[0].x() == doctest::Approx(r));
            CHECK(std::abs(a.positions[0].y()) < 1e-15);
        }
    }
}

}
