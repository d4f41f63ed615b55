#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "phiotdr/jones.hpp"
#include "phiotdr/rng.hpp"

using namespace phiotdr;

namespace {

double frob_diff(const JonesMatrix& a, const JonesMatrix& b) {
    return std::sqrt(std::norm(a.xx - b.xx) + std::norm(a.xy - b.xy) + std::norm(a.yx - b.yx) +
                     std::norm(a.yy - b.yy));
}

JonesMatrix conj_transpose(const JonesMatrix& m) {
    return JonesMatrix{std::conj(m.xx), std::conj(m.yx), std::conj(m.xy), std::conj(m.yy)};
}

JonesMatrix random_matrix(RngStream& rng) {
    auto c = [&] { return Complex{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}; };
    return JonesMatrix{c(), c(), c(), c()};
}

}  // namespace

TEST_CASE("rotation basics") {
    CHECK(frob_diff(rotation(0.0), identity()) == doctest::Approx(0.0));

    const JonesMatrix q = rotation(M_PI / 2.0);
    CHECK(q.xx.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(q.xy.real() == doctest::Approx(-1.0));
    CHECK(q.yx.real() == doctest::Approx(1.0));

    // inverse rotation composes to identity
    CHECK(frob_diff(rotation(0.7) * rotation(-0.7), identity()) < 1e-15);
    // additivity
    CHECK(frob_diff(rotation(0.3) * rotation(0.5), rotation(0.8)) < 1e-14);
    CHECK(std::abs(determinant(rotation(1.1)) - Complex{1.0, 0.0}) < 1e-15);

    CHECK_THROWS_AS(rotation(std::nan("")), std::invalid_argument);
}

TEST_CASE("retarder basics") {
    const JonesMatrix d = retarder(0.4);
    CHECK(d.xx == std::polar(1.0, 0.4));
    CHECK(d.yy == std::polar(1.0, -0.4));
    CHECK(d.xy == Complex{0.0, 0.0});
    CHECK(std::abs(determinant(d) - Complex{1.0, 0.0}) < 1e-15);
    CHECK(frob_diff(retarder(0.4) * retarder(-0.4), identity()) < 1e-15);
    CHECK_THROWS_AS(retarder(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("mirror is an involution with determinant -1") {
    CHECK(frob_diff(mirror() * mirror(), identity()) < 1e-15);
    CHECK(std::abs(determinant(mirror()) - Complex{-1.0, 0.0}) < 1e-15);
}

TEST_CASE("determinant is multiplicative over random matrices") {
    RngStream rng(123);
    for (int k = 0; k < 200; ++k) {
        const JonesMatrix a = random_matrix(rng), b = random_matrix(rng);
        const Complex lhs = determinant(a * b);
        const Complex rhs = determinant(a) * determinant(b);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("rotations and retarders are unitary") {
    RngStream rng(5);
    for (int k = 0; k < 100; ++k) {
        const JonesMatrix u =
            retarder(rng.uniform(-M_PI, M_PI)) * rotation(rng.uniform(-M_PI, M_PI)) *
            retarder(rng.uniform(-M_PI, M_PI));
        CHECK(frob_diff(conj_transpose(u) * u, identity()) < 1e-12);
    }
}

TEST_CASE("transpose and scale behave componentwise") {
    RngStream rng(9);
    const JonesMatrix m = random_matrix(rng);
    const JonesMatrix t = transpose(m);
    CHECK(t.xy == m.yx);
    CHECK(t.yx == m.xy);
    CHECK(frob_diff(transpose(t), m) == 0.0);

    const Complex s{0.5, -2.0};
    const JonesMatrix sm = s * m;
    CHECK(sm.xx == s * m.xx);
    CHECK(std::abs(determinant(sm) - s * s * determinant(m)) < 1e-12);
}

TEST_CASE("finiteness check") {
    JonesMatrix m;
    CHECK(m.finite());
    m.yx = Complex{std::nan(""), 0.0};
    CHECK_FALSE(m.finite());
}
