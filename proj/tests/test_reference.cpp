#include <doctest.h>

#include <cmath>

#include "mfc/reference/reference.hpp"

using namespace mfc::reference;

TEST_CASE("smoothstep values, rates and clamps") {
    // 90 -> 120 over 15 s: polynomial midpoint symmetry gives 105.
    const auto mid = smoothstep_eval(90.0, 120.0, 15.0, 7.5);
    CHECK(mid[0] == doctest::Approx(105.0).epsilon(1e-14));
    CHECK(mid[1] == doctest::Approx(1.5 * 30.0 / 15.0).epsilon(1e-14));

    const auto start = smoothstep_eval(90.0, 120.0, 15.0, 0.0);
    CHECK(start[0] == 90.0);
    CHECK(start[1] == 0.0);
    CHECK(start[2] == doctest::Approx(6.0 * 30.0 / 225.0).epsilon(1e-14));

    const auto end = smoothstep_eval(90.0, 120.0, 15.0, 15.0);
    CHECK(end[0] == 120.0);
    CHECK(end[1] == 0.0);
    CHECK(end[2] == doctest::Approx(-6.0 * 30.0 / 225.0).epsilon(1e-14));

    const auto after = smoothstep_eval(90.0, 120.0, 15.0, 22.0);
    CHECK(after[0] == 120.0);
    CHECK(after[1] == 0.0);
    CHECK(after[2] == 0.0);

    const auto before = smoothstep_eval(90.0, 120.0, 15.0, -1.0);
    CHECK(before[0] == 90.0);
    CHECK(before[1] == 0.0);

    CHECK_THROWS_AS(smoothstep_eval(0.0, 1.0, 0.0, 0.0), InvalidDuration);
}

TEST_CASE("reference sampling") {
    const auto constant = ReferenceSignal::constant(3.5, 2);
    const auto c = constant.sample(4.0);
    CHECK(c.xi_d[0] == 3.5);
    CHECK(c.xi_d[1] == 0.0);
    CHECK(c.top_derivative == 0.0);

    const Transition tr{0.0, 10.0, 4.0};
    const auto ref = ReferenceSignal::from_transitions(2.0, {&tr, 1}, 2);
    const auto mid = ref.sample(2.0);
    CHECK(mid.xi_d[0] == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(mid.xi_d[1] == doctest::Approx(1.5 * 8.0 / 4.0).epsilon(1e-14));

    const auto late = ref.sample(100.0);
    CHECK(late.xi_d[0] == 10.0);
    CHECK(late.xi_d[1] == 0.0);
    CHECK(late.top_derivative == 0.0);
    // Clamping idempotence.
    const auto later = ref.sample(250.0);
    CHECK(late.xi_d[0] == later.xi_d[0]);
    CHECK(late.xi_d[1] == later.xi_d[1]);
}

TEST_CASE("reference construction rejects broken profiles") {
    const Transition overlapping[] = {{0.0, 10.0, 5.0}, {3.0, 2.0, 1.0}};
    CHECK_THROWS_AS(ReferenceSignal::from_transitions(0.0, overlapping, 2),
                    std::invalid_argument);
    const Transition bad_duration{0.0, 1.0, -2.0};
    CHECK_THROWS_AS(ReferenceSignal::from_transitions(0.0, {&bad_duration, 1}, 2),
                    InvalidDuration);
}

TEST_CASE("wheel reference") {
    const double v = 120.0 / 3.6;  // 120 km/h in m/s
    const auto d = wheel_reference({v, 0.0, 0.0}, 0.33);
    CHECK(d.xi_d[0] == doctest::Approx(101.0101010101).epsilon(1e-9));
    CHECK(d.xi_d[1] == 0.0);
    CHECK(d.top_derivative == 0.0);

    const auto zero = wheel_reference({0.0, 0.0, 0.0}, 0.5);
    CHECK(zero.xi_d[0] == 0.0);
    CHECK(zero.xi_d[1] == 0.0);

    const auto same = wheel_reference({3.0, -1.0, 0.5}, 1.0);
    CHECK(same.xi_d[0] == 3.0);
    CHECK(same.xi_d[1] == -1.0);
    CHECK(same.top_derivative == 0.5);

    CHECK_THROWS_AS(wheel_reference({1.0, 0.0, 0.0}, 0.0), InvalidRadius);
}

TEST_CASE("reference bound") {
    const auto zero = ReferenceSignal::constant(0.0, 2);
    CHECK(reference_bound(zero, 10.0, 0.05) == doctest::Approx(1e-12));

    const auto constant = ReferenceSignal::constant(-2.0, 2);
    CHECK(reference_bound(constant, 10.0, 0.05) == doctest::Approx(2.1).epsilon(1e-12));

    // 90 -> 120 km/h wheel-speed profile exceeds the terminal wheel speed.
    const double w0 = 90.0 / 3.6 / 0.33, w1 = 120.0 / 3.6 / 0.33;
    const Transition tr{0.0, w1, 15.0};
    const auto wheel = ReferenceSignal::from_transitions(w0, {&tr, 1}, 2);
    const double r_d = reference_bound(wheel, 30.0, 0.05);
    CHECK(r_d > w1);
    CHECK(r_d == doctest::Approx(1.05 * w1).epsilon(1e-6));
}

TEST_CASE("analytic derivatives match finite differences away from joints") {
    const Transition tr{1.0, 5.0, 6.0};
    const auto ref = ReferenceSignal::from_transitions(1.0, {&tr, 1}, 2);
    const double h = 1e-5;
    for (double t : {1.7, 2.9, 4.0, 5.5, 6.3}) {
        const auto lo = ref.sample(t - h);
        const auto hi = ref.sample(t + h);
        const auto mid = ref.sample(t);
        const double fd_rate = (hi.xi_d[0] - lo.xi_d[0]) / (2.0 * h);
        const double fd_accel = (hi.xi_d[1] - lo.xi_d[1]) / (2.0 * h);
        CHECK(mid.xi_d[1] == doctest::Approx(fd_rate).epsilon(1e-6));
        CHECK(mid.top_derivative == doctest::Approx(fd_accel).epsilon(1e-5));
    }
}

TEST_CASE("value and rate are continuous across joints") {
    const Transition steps[] = {{2.0, 4.0, 3.0}, {8.0, -1.0, 2.0}};
    const auto ref = ReferenceSignal::from_transitions(0.0, steps, 2);
    for (double joint : {2.0, 5.0, 8.0, 10.0}) {
        const auto left = ref.sample(joint - 1e-9);
        const auto right = ref.sample(joint + 1e-9);
        CHECK(left.xi_d[0] == doctest::Approx(right.xi_d[0]).epsilon(1e-8));
        CHECK(left.xi_d[1] == doctest::Approx(right.xi_d[1]).scale(1.0).epsilon(1e-7));
    }
}
