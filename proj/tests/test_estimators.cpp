#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "phiotdr/estimators.hpp"

using namespace phiotdr;

namespace {

NoiseConfig quiet() {
    NoiseConfig cfg;
    cfg.linewidth_hz = 0.0;
    cfg.snr_db = std::numeric_limits<double>::infinity();
    cfg.n_samples = 16;
    return cfg;
}

}  // namespace

TEST_CASE("scheme names round-trip") {
    for (ProbeScheme s : {ProbeScheme::Siso, ProbeScheme::Simo, ProbeScheme::Mimo})
        CHECK(scheme_from_name(scheme_name(s)) == s);
    CHECK_THROWS(scheme_from_name("mime"));
    CHECK(phase_modulus(ProbeScheme::Mimo) == doctest::Approx(M_PI));
    CHECK(phase_modulus(ProbeScheme::Siso) == doctest::Approx(2.0 * M_PI));
}

TEST_CASE("half-angle determinant phase") {
    // det(mirror) = -1 => half-angle pi/2
    CHECK(phase_mimo(mirror()).value == doctest::Approx(M_PI / 2.0));
    // scaled identity: det = r^2 e^{2j a} => half-angle a
    JonesMatrix h = std::polar(0.5, 0.3) * identity();
    CHECK(phase_mimo(h).value == doctest::Approx(0.3));
    CHECK_FALSE(phase_mimo(h, 0.1).faded);
    CHECK(phase_mimo(h, 0.3).faded);
}

TEST_CASE("column-sum and single-element phases") {
    CHECK(phase_simo(Complex{1.0, 0.0}, Complex{0.0, 1.0}).value == doctest::Approx(M_PI / 4.0));
    CHECK(phase_simo(Complex{1.0, 0.0}, Complex{-1.0, 0.0}).faded);
    CHECK(phase_siso(Complex{0.0, 2.0}).value == doctest::Approx(M_PI / 2.0));
    CHECK(phase_siso(Complex{0.0, 0.0}).faded);
}

TEST_CASE("closed-form column sum agrees with the assembled matrix") {
    RngStream rng(17);
    for (int k = 0; k < 100; ++k) {
        SegmentParams seg;
        seg.theta_cap = std::asin(std::sqrt(rng.uniform()));
        seg.beta = rng.uniform(-M_PI, M_PI);
        seg.gamma = rng.uniform(-M_PI, M_PI);
        seg.attenuation = rng.uniform(0.1, 1.0);
        seg.phasor = std::polar(rng.uniform(0.2, 2.0), rng.uniform(-M_PI, M_PI));
        const JonesMatrix h = backscatter_matrix(seg, 0.0);
        const PhaseSample direct = phase_simo(h.xx, h.yx);
        const PhaseSample closed = simo_closed_form(seg);
        const double d = std::remainder(direct.value - closed.value, 2.0 * M_PI);
        CHECK(std::abs(d) < 1e-10);
    }
}

TEST_CASE("complete polarization fade at beta = 0, theta = pi/4") {
    SegmentParams seg;
    seg.beta = 0.0;
    seg.theta_cap = M_PI / 4.0;
    seg.gamma = 0.8;
    const JonesMatrix h = backscatter_matrix(seg, 0.0);
    CHECK(std::abs(h.xx) < 1e-12);
    CHECK(phase_siso(h.xx, 1e-6).faded);
}

TEST_CASE("unwrap") {
    // wrapped ramp modulo pi grows back to a straight line
    std::vector<double> wrapped;
    const double step = 0.4;
    for (int k = 0; k < 50; ++k) {
        double v = k * step;
        v -= M_PI * std::floor(v / M_PI + 0.5);
        wrapped.push_back(v);
    }
    // step < pi/2, so unwrapping recovers the true constant slope
    const auto un = unwrap(wrapped, M_PI);
    for (int k = 1; k < 50; ++k) CHECK(un[k] - un[k - 1] == doctest::Approx(step));
    CHECK_THROWS(unwrap({}, M_PI));
    CHECK(unwrap({1.0, 1.1}, 2.0 * M_PI)[1] == doctest::Approx(1.1));
}

TEST_CASE("determinant phase ignores the launch misalignment") {
    FiberSpec spec;
    spec.length_m = 300.0;
    const FiberRealization fiber = sample_fiber(spec, 3);
    NoiseConfig cfg = quiet();
    RngStream walk_rng(0);
    const LaserWalk walk = laser_walk(0.0, cfg.dt_s, cfg.n_samples, walk_rng);

    std::vector<double> first;
    for (double theta : {-1.2, 0.0, 0.9, 2.8}) {
        const std::vector<double> series(static_cast<std::size_t>(cfg.n_samples), theta);
        const PhaseTrace tr =
            estimate_trace(fiber, walk, series, cfg, 11, ProbeScheme::Mimo);
        if (first.empty()) {
            for (int i = 0; i < tr.n_segments; ++i) first.push_back(tr.at(i, 0));
        } else {
            for (int i = 0; i < tr.n_segments; ++i) {
                const double d = std::remainder(tr.at(i, 0) - first[i], M_PI);
                CHECK(std::abs(d) < 1e-12);
            }
        }
    }
}

TEST_CASE("global phase equivariance of all three estimators") {
    RngStream rng(8);
    SegmentParams seg;
    seg.theta_cap = 0.3;
    seg.beta = 0.7;
    seg.gamma = -0.2;
    seg.phasor = Complex{0.8, 0.1};
    const JonesMatrix h = backscatter_matrix(seg, 0.4);
    const double shift = 0.25;
    const JonesMatrix hs = std::polar(1.0, shift) * h;
    CHECK(std::abs(std::remainder(phase_siso(hs.xx).value - phase_siso(h.xx).value - shift,
                                  2.0 * M_PI)) < 1e-12);
    CHECK(std::abs(std::remainder(phase_simo(hs.xx, hs.yx).value -
                                      phase_simo(h.xx, h.yx).value - shift,
                                  2.0 * M_PI)) < 1e-12);
    CHECK(std::abs(std::remainder(phase_mimo(hs).value - phase_mimo(h).value - shift, M_PI)) <
          1e-12);
    // positive real scaling changes nothing
    CHECK(phase_mimo(2.5 * h).value == doctest::Approx(phase_mimo(h).value));
}

TEST_CASE("serial and parallel drivers agree bit for bit") {
    FiberSpec spec;
    spec.length_m = 600.0;
    const FiberRealization fiber = sample_fiber(spec, 21);
    NoiseConfig cfg;
    cfg.n_samples = 64;
    RngStream walk_rng(31);
    const LaserWalk walk = laser_walk(cfg.linewidth_hz, cfg.dt_s, cfg.n_samples, walk_rng);
    const std::vector<double> series(static_cast<std::size_t>(cfg.n_samples), 0.2);
    const std::vector<ProbeScheme> schemes = {ProbeScheme::Siso, ProbeScheme::Simo,
                                              ProbeScheme::Mimo};
    const auto serial = estimate_traces(fiber, walk, series, cfg, 99, schemes, 1,
                                        ExecPolicy::Serial);
    const auto parallel = estimate_traces(fiber, walk, series, cfg, 99, schemes, 1,
                                          ExecPolicy::Parallel);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t s = 0; s < serial.size(); ++s) {
        CHECK(serial[s].values == parallel[s].values);
        CHECK(serial[s].flags == parallel[s].flags);
    }
}

TEST_CASE("second column option feeds the cross-polarized pair") {
    FiberSpec spec;
    spec.length_m = 50.0;
    const FiberRealization fiber = sample_fiber(spec, 2);
    NoiseConfig cfg = quiet();
    RngStream walk_rng(0);
    const LaserWalk walk = laser_walk(0.0, cfg.dt_s, cfg.n_samples, walk_rng);
    const std::vector<double> series(static_cast<std::size_t>(cfg.n_samples), 0.0);
    const PhaseTrace col2 =
        estimate_trace(fiber, walk, series, cfg, 5, ProbeScheme::Simo, 2);
    const JonesMatrix h = backscatter_matrix(fiber.segments[0], 0.0);
    CHECK(col2.at(0, 0) == doctest::Approx(std::arg(h.xy + h.yy)));
}
