#include <doctest.h>

#include <cmath>
#include <random>

#include "mfc/controllers/control_laws.hpp"
#include "mfc/controllers/gain_design.hpp"
#include "mfc/ctrlmath/margins.hpp"

using namespace mfc;
using namespace mfc::controllers;

namespace {

ControllerSetup efficient_setup(double epsilon) {
    ControllerSetup s;
    s.mode = Mode::MfcEfficient;
    s.design = make_gain_design({1.0, 2.0}, epsilon);
    s.nominal = plant::double_integrator();
    return s;
}

}  // namespace

TEST_CASE("gain scaling") {
    const auto scaled = scale_gain(std::vector<double>{1.0, 2.0}, 0.15);
    CHECK(scaled[0] == doctest::Approx(1.0 / (0.15 * 0.15)).epsilon(1e-13));
    CHECK(scaled[0] == doctest::Approx(44.4444444444).epsilon(1e-9));
    CHECK(scaled[1] == doctest::Approx(2.0 / 0.15).epsilon(1e-13));
    CHECK(scaled[1] == doctest::Approx(13.3333333333).epsilon(1e-9));

    const auto unscaled = scale_gain(std::vector<double>{1.0, 2.0}, 1.0);
    CHECK(unscaled[0] == 1.0);
    CHECK(unscaled[1] == 2.0);

    const auto single = scale_gain(std::vector<double>{3.0}, 0.5);
    CHECK(single[0] == doctest::Approx(6.0));

    CHECK_THROWS_AS(scale_gain(std::vector<double>{1.0}, 0.0), InvalidScaling);
}

TEST_CASE("gain scaling homogeneity with the appendix scaling matrix") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t n = 1; n <= 5; ++n) {
        std::vector<double> k(n);
        for (auto& v : k) v = 0.5 + std::abs(gauss(rng));
        for (double eps : {0.9, 0.4, 0.1}) {
            const auto k_eps = scale_gain(k, eps);
            for (int trial = 0; trial < 20; ++trial) {
                std::vector<double> v(n);
                for (auto& x : v) x = gauss(rng);
                double lhs = 0.0, rhs = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    // D_eps = diag(eps^{n-1}, ..., eps, 1)
                    lhs += k_eps[i] * std::pow(eps, double(n - 1 - i)) * v[i];
                    rhs += k[i] * v[i];
                }
                CHECK(lhs == doctest::Approx(rhs / eps).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("gain design artifacts for k = [1, 2]") {
    const GainDesign d = make_gain_design({1.0, 2.0}, 0.15);
    CHECK(d.P(0, 0) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(d.P(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.lambda_min == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-12));
    CHECK(d.lambda_max == doctest::Approx(1.0 + std::sqrt(0.5)).epsilon(1e-12));
    CHECK(d.p_ratio == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));
    CHECK(d.pb_norm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    CHECK_THROWS_AS(make_gain_design({-1.0, 0.0}, 0.5), ctrlmath::NotHurwitz);
    CHECK_THROWS_AS(make_gain_design({1.0, 2.0}, 1.5), InvalidScaling);
}

TEST_CASE("epsilon bounds from the precision inequality") {
    const GainDesign d = make_gain_design({1.0, 2.0}, 0.5);

    const auto pure_offset = epsilon_bounds(d, {1.0, 0.0}, 0.0, 1.0);
    CHECK(pure_offset.stability == 1.0);
    CHECK(pure_offset.precision == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-12));
    CHECK(pure_offset.precision == doctest::Approx(0.29289321881).epsilon(1e-9));

    const auto unconstrained = epsilon_bounds(d, {0.0, 0.0}, 0.0, 1.0);
    CHECK(unconstrained.stability == 1.0);
    CHECK(unconstrained.precision == 1.0);

    const auto mixed = epsilon_bounds(d, {1.0, 0.5}, 0.0, 1.0);
    const double expected = 1.0 / (std::sqrt(2.0) * (1.0 + std::sqrt(2.0)) + std::sqrt(2.0) * 0.5);
    CHECK(mixed.precision == doctest::Approx(expected).epsilon(1e-12));
    CHECK(mixed.precision == doctest::Approx(0.2426406871).epsilon(1e-9));
    CHECK(mixed.precision <= mixed.stability);

    CHECK_THROWS_AS(epsilon_bounds(d, {1.0, 0.0}, 0.0, 0.0), InvalidPrecision);
}

TEST_CASE("any epsilon below the precision bound satisfies the strict inequality") {
    const GainDesign d = make_gain_design({1.0, 2.0}, 0.5);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(0.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const plant::PerturbationBound bound{uni(rng), 0.5 * uni(rng)};
        const double r_d = uni(rng);
        const double r_inf = 0.05 + uni(rng);
        const auto bounds = epsilon_bounds(d, bound, r_d, r_inf);
        const double eps = 0.999 * bounds.precision;
        const double c = 2.0 * d.pb_norm;
        const double rhs =
            c * d.p_ratio * (bound.delta0 + bound.lipschitz * r_d) / r_inf + c * bound.lipschitz;
        CHECK(1.0 / eps > rhs);
    }
}

TEST_CASE("ultimate radius prediction") {
    GainDesign d = make_gain_design({1.0, 2.0}, 0.1);
    CHECK(ultimate_radius(d, {0.0, 0.0}, 5.0) == 0.0);

    const double expected = (std::sqrt(2.0) + 2.0) / 10.0;
    CHECK(ultimate_radius(d, {1.0, 0.0}, 0.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(ultimate_radius(d, {1.0, 0.0}, 0.0) == doctest::Approx(0.34142135).epsilon(1e-7));

    // Linear in eps when L_Delta = 0.
    const GainDesign half = d.with_epsilon(0.05);
    CHECK(ultimate_radius(half, {1.0, 0.0}, 0.0) ==
          doctest::Approx(0.5 * ultimate_radius(d, {1.0, 0.0}, 0.0)).epsilon(1e-12));

    // Violating the stability inequality is an error.
    const GainDesign big = d.with_epsilon(0.9);
    CHECK_THROWS_AS(ultimate_radius(big, {0.0, 2.0}, 0.0), StabilityBoundViolated);
}

TEST_CASE("efficient MFC control law") {
    // Zero-error state: pure feedforward.
    {
        ControllerSetup s = efficient_setup(0.5);
        ControllerState cs;
        cs.mode = Mode::MfcEfficient;
        cs.xi_star = {1.0, 2.0};
        const plant::FullState meas{{1.0, 2.0}, {}};
        const reference::DesiredState ref{{1.0, 2.0}, 7.0};
        const auto out = mfc_control(s, cs, meas, ref);
        CHECK(out.u == doctest::Approx(7.0));
        CHECK(out.v_star == 0.0);
        CHECK(out.v_tilde == 0.0);
        CHECK(out.mcl_xi_dot[0] == 2.0);
        CHECK(out.mcl_xi_dot[1] == doctest::Approx(7.0));
    }
    // Hand-evaluated example: k=[1,2], eps=0.5.
    {
        ControllerSetup s = efficient_setup(0.5);
        ControllerState cs;
        cs.mode = Mode::MfcEfficient;
        cs.xi_star = {0.5, 0.0};
        const plant::FullState meas{{1.0, 0.0}, {}};
        const reference::DesiredState ref{{0.0, 0.0}, 0.0};
        const auto out = mfc_control(s, cs, meas, ref);
        CHECK(out.v_star == doctest::Approx(-0.5).epsilon(1e-15));
        CHECK(out.v_tilde == doctest::Approx(-2.0).epsilon(1e-15));
        CHECK(out.u == doctest::Approx(-2.5).epsilon(1e-15));
    }
}

TEST_CASE("u(0) under exact initialisation is bit-identical across epsilon") {
    const plant::FullState meas{{1.23, -0.77}, {}};
    const reference::DesiredState ref{{0.4, 0.1}, 0.25};
    double first = 0.0;
    bool have_first = false;
    for (double eps : {0.25, 0.15, 0.05}) {
        ControllerSetup s = efficient_setup(eps);
        ControllerState cs;
        cs.mode = Mode::MfcEfficient;
        cs.xi_star = meas.xi;  // exact init
        const auto out = mfc_control(s, cs, meas, ref);
        if (!have_first) {
            first = out.u;
            have_first = true;
        }
        CHECK(out.u == first);  // bit-exact
    }
}

TEST_CASE("classical and efficient laws produce the same input") {
    plant::PlantDynamics toy = plant::toy_nonlinear_internal();
    ControllerSetup eff;
    eff.mode = Mode::MfcEfficient;
    eff.design = make_gain_design({1.0, 2.0}, 0.3);
    eff.nominal = toy;
    ControllerSetup cls = eff;
    cls.mode = Mode::MfcClassical;

    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss(0.0, 1.5);
    for (int trial = 0; trial < 100; ++trial) {
        ControllerState s_eff;
        s_eff.mode = Mode::MfcEfficient;
        s_eff.xi_star = {gauss(rng), gauss(rng)};
        ControllerState s_cls = s_eff;
        s_cls.mode = Mode::MfcClassical;
        s_cls.eta_star = {gauss(rng)};

        const plant::FullState meas{{gauss(rng), gauss(rng)}, {gauss(rng)}};
        const reference::DesiredState ref{{gauss(rng), gauss(rng)}, gauss(rng)};

        const auto out_eff = mfc_control(eff, s_eff, meas, ref);
        const auto out_cls = mfc_control(cls, s_cls, meas, ref);

        // Classical decomposition u = u* + u~ and equivalence of the sums.
        REQUIRE(out_cls.u_star.has_value());
        CHECK(out_cls.u ==
              doctest::Approx(*out_cls.u_star + *out_cls.u_tilde).epsilon(1e-12));
        CHECK(out_cls.u == doctest::Approx(out_eff.u).epsilon(1e-12));
        // Identical MCL external derivatives up to roundoff.
        CHECK(out_cls.mcl_xi_dot[0] == doctest::Approx(out_eff.mcl_xi_dot[0]).epsilon(1e-12));
        CHECK(out_cls.mcl_xi_dot[1] ==
              doctest::Approx(out_eff.mcl_xi_dot[1]).scale(1.0).epsilon(1e-11));
    }
}

TEST_CASE("single-loop control law") {
    ControllerSetup s = efficient_setup(0.5);
    s.mode = Mode::SingleLoop;
    ControllerState cs;
    cs.mode = Mode::SingleLoop;

    const reference::DesiredState ref{{1.0, -2.0}, 3.0};
    const plant::FullState on_ref{{1.0, -2.0}, {}};
    const auto zero_err = single_loop_control(s, cs, on_ref, ref);
    CHECK(zero_err.u == doctest::Approx(3.0));  // (-a + y_d^(n)) / b with a=0, b=1

    // Initial-value formula with the scaled gain.
    const plant::FullState meas{{2.0, 1.0}, {}};
    const auto out = single_loop_control(s, cs, meas, ref);
    const auto k_eps = scale_gain(std::vector<double>{1.0, 2.0}, 0.5);
    const double expected =
        3.0 - (k_eps[0] * (meas.xi[0] - ref.xi_d[0]) + k_eps[1] * (meas.xi[1] - ref.xi_d[1]));
    CHECK(out.u == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("pi auxiliary law") {
    PiGains g;
    g.kp = 0.65;
    g.ki = 0.16;
    const auto [v0, rate0] = pi_auxiliary(g, 0.0, 0.0, 0.0);
    CHECK(v0 == 0.0);
    CHECK(rate0 == 0.0);

    // Constant error y* - y = 1 (e1 = -1): the integral ramps and
    // w(t) = kp + ki t.
    PiGains unit;
    unit.b0 = 1.0;
    unit.kp = 0.65;
    unit.ki = 0.16;
    for (double t : {0.0, 1.0, 2.5}) {
        const auto [v, rate] = pi_auxiliary(unit, -1.0, 0.0, t);
        CHECK(rate == 1.0);
        CHECK(v == doctest::Approx(0.65 + 0.16 * t).epsilon(1e-14));
    }

    // The case-study constants pass the 75 degree margin check.
    PiGains cruise;
    cruise.a0 = 0.0;
    cruise.a1 = 50.0;
    cruise.b0 = 4.49 / (0.02 * 3.0);
    cruise.kp = 0.65;
    cruise.ki = 0.16;
    const auto m = ctrlmath::stability_margins(pi_open_loop(cruise));
    CHECK(m.phase_margin_deg == doctest::Approx(75.0).epsilon(1.0 / 75.0));
    CHECK(m.crossover_rad_s == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("controller cost by mode") {
    CHECK(controller_cost(Mode::MfcEfficient, 2, 3) == 2);
    CHECK(controller_cost(Mode::MfcClassical, 2, 3) == 5);
    CHECK(controller_cost(Mode::SingleLoop, 2, 3) == 0);
    CHECK(controller_cost(Mode::PiMfc, 2, 3) == 3);
    CHECK(controller_cost(Mode::PiSingleLoop, 2, 3) == 1);
}

TEST_CASE("mode names round-trip") {
    for (Mode m : {Mode::MfcEfficient, Mode::MfcClassical, Mode::SingleLoop, Mode::PiMfc,
                   Mode::PiSingleLoop})
        CHECK(mode_from_string(to_string(m)) == m);
    CHECK_FALSE(mode_from_string("nonsense").has_value());
}
