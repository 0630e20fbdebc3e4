#include <cmath>

#include "doctest.h"
#include "dynball/geometry.hpp"
#include "dynball/rng.hpp"

using namespace dynball;

TEST_CASE("plane distance is Euclidean") {
    const Domain d = Domain::plane();
    CHECK(distance(d, {0, 0}, {3, 4}) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(distance(d, {1, 2}, {1, 2}) == 0.0);
}

TEST_CASE("torus distance wraps to the shortest representative") {
    const Domain d = Domain::flat_torus(1.0);
    CHECK(distance(d, {0.1, 0.1}, {0.9, 0.1}) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(distance(d, {0.5, 0.5}, {0.5, 0.5}) == 0.0);

    const Vec2 w = displacement(d, {0.1, 0.0}, {0.9, 0.0});
    CHECK(w.dx == doctest::Approx(-0.2).epsilon(1e-14));
    CHECK(w.dy == 0.0);
}

TEST_CASE("displacement on the plane is the plain difference") {
    const Domain d = Domain::plane();
    const Vec2 w = displacement(d, {0, 0}, {3, 4});
    CHECK(w.dx == 3.0);
    CHECK(w.dy == 4.0);
    const Vec2 z = displacement(d, {2, 7}, {2, 7});
    CHECK(z.dx == 0.0);
    CHECK(z.dy == 0.0);
}

TEST_CASE("norm basics") {
    CHECK(norm({3, 4}) == 5.0);
    CHECK(norm({0, 0}) == 0.0);
    CHECK(norm({-1, 0}) == 1.0);
    CHECK_THROWS_AS(normalized({0, 0}), DegenerateSeparation);
}

TEST_CASE("closed disc rejects outside points") {
    const Domain d = Domain::closed_disc({0, 0}, 1.0);
    CHECK_THROWS_AS(distance(d, {0, 0}, {2, 0}), DomainViolation);
    CHECK_THROWS_AS(displacement(d, {1.5, 0}, {0, 0}), DomainViolation);
    CHECK(distance(d, {0, 0}, {1, 0}) == 1.0);  // boundary included
}

TEST_CASE("metric axioms hold on random triples") {
    const Domain domains[] = {Domain::plane(), Domain::flat_torus(1.0),
                              Domain::closed_disc({0, 0}, 1.0)};
    for (const Domain& d : domains) {
        auto rng = make_rng(101);
        for (int i = 0; i < 1000; ++i) {
            const Point2 a = sample_point(d, rng);
            const Point2 b = sample_point(d, rng);
            const Point2 c = sample_point(d, rng);
            const double ab = distance(d, a, b);
            const double ba = distance(d, b, a);
            const double ac = distance(d, a, c);
            const double cb = distance(d, c, b);
            CHECK(std::abs(ab - ba) <= 1e-12);
            CHECK(ab <= ac + cb + 1e-12);
            CHECK(distance(d, a, a) == 0.0);
        }
    }
}

TEST_CASE("norm of displacement equals distance on the same float path") {
    const Domain domains[] = {Domain::plane(), Domain::flat_torus(1.0),
                              Domain::closed_disc({0, 0}, 1.0)};
    for (const Domain& d : domains) {
        auto rng = make_rng(202);
        for (int i = 0; i < 200; ++i) {
            const Point2 a = sample_point(d, rng);
            const Point2 b = sample_point(d, rng);
            CHECK(norm(displacement(d, a, b)) == distance(d, a, b));
        }
    }
}

TEST_CASE("torus distance is invariant under integer-period shifts") {
    const Domain d = Domain::flat_torus(1.0);
    auto rng = make_rng(303);
    for (int i = 0; i < 200; ++i) {
        const Point2 a = sample_point(d, rng);
        const Point2 b = sample_point(d, rng);
        const int kx = static_cast<int>(uniform_range(rng, -3, 4));
        const int ky = static_cast<int>(uniform_range(rng, -3, 4));
        const Point2 shifted{b.x + kx, b.y + ky};
        const double base = distance(d, a, b);
        const double moved = distance(d, a, d.canonical(shifted));
        if (base > 0) CHECK(std::abs(moved - base) / base <= 1e-12);
    }
}

TEST_CASE("matrix operator norm matches singular values of known matrices") {
    CHECK(operator_norm(Matrix2::identity()) == doctest::Approx(1.0).epsilon(1e-15));
    // [[2,1],[1,1]] is symmetric positive definite: norm = largest eigenvalue
    const Matrix2 cat{2, 1, 1, 1};
    CHECK(operator_norm(cat) ==
          doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-14));
    const Matrix2 diag{2, 0, 0, 0.5};
    CHECK(operator_norm(diag) == doctest::Approx(2.0).epsilon(1e-15));

    const Matrix2 inv = inverse(cat);
    const Matrix2 prod = cat * inv;
    CHECK(prod.a11 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(prod.a12 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(prod.a21 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(prod.a22 == doctest::Approx(1.0).epsilon(1e-14));
}
