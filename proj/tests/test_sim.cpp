#include <doctest.h>

#include <cmath>
#include <random>

#include "mfc/controllers/gain_design.hpp"
#include "mfc/sim/closed_loop.hpp"
#include "mfc/sim/experiments.hpp"

using namespace mfc;
using namespace mfc::sim;

namespace {

controllers::ControllerSetup toy_setup(controllers::Mode mode, double epsilon,
                                       const plant::PlantDynamics& nominal) {
    controllers::ControllerSetup s;
    s.mode = mode;
    s.design = controllers::make_gain_design({1.0, 2.0}, epsilon);
    s.nominal = nominal;
    s.nominal.delta = nullptr;
    return s;
}

RefFn constant_ref(std::size_t n_xi, double value) {
    const auto signal = reference::ReferenceSignal::constant(value, n_xi);
    return [signal](double t) { return signal.sample(t); };
}

}  // namespace

TEST_CASE("rk4 step against the exponential oracle") {
    const DerivFn decay = [](double, std::span<const double> x, std::span<double> dx) {
        dx[0] = -x[0];
    };
    const std::vector<double> x{1.0};
    const auto next = rk4_step(decay, 0.0, x, 0.1);
    CHECK(std::abs(next[0] - std::exp(-0.1)) <= 1e-7);

    const DerivFn zero = [](double, std::span<const double>, std::span<double> dx) {
        dx[0] = 0.0;
    };
    CHECK(rk4_step(zero, 0.0, x, 0.5)[0] == 1.0);

    const DerivFn one = [](double, std::span<const double>, std::span<double> dx) {
        dx[0] = 1.0;
    };
    CHECK(rk4_step(one, 0.0, x, 0.25)[0] == 1.25);
}

TEST_CASE("rk4 reports non-finite stages") {
    const DerivFn bad = [](double, std::span<const double>, std::span<double> dx) {
        dx[0] = std::numeric_limits<double>::quiet_NaN();
    };
    const std::vector<double> x{1.0};
    try {
        rk4_step(bad, 0.0, x, 0.1);
        FAIL("expected NonFiniteDerivative");
    } catch (const NonFiniteDerivative& e) {
        CHECK(std::string(e.what()).find("stage 1") != std::string::npos);
    }
}

TEST_CASE("closed-loop integration converges at RK4 order") {
    const plant::PlantDynamics truth = plant::perturbed_double_integrator(0.5, 0.1, 2.0);
    const auto setup = toy_setup(controllers::Mode::MfcEfficient, 0.3, truth);
    InitialCondition init;
    init.xi0 = {1.0, -0.5};
    init.model_init = ModelInitPolicy::Exact;
    const RefFn ref = constant_ref(2, 0.0);

    auto final_xi1 = [&](double h) {
        SimConfig cfg;
        cfg.step_h = h;
        cfg.horizon_T = 2.0;
        const auto r = run_closed_loop(truth, setup, ref, init, cfg);
        return r.xi[0].back();
    };
    const double e1 = std::abs(final_xi1(0.02) - final_xi1(0.005));
    const double e2 = std::abs(final_xi1(0.01) - final_xi1(0.005));
    const double order = std::log2(e1 / e2 - 1.0);  // Richardson-style estimate
    CHECK(order >= 3.5);
}

TEST_CASE("simulation is deterministic") {
    const plant::PlantDynamics truth = plant::toy_nonlinear_internal();
    auto setup = toy_setup(controllers::Mode::MfcClassical, 0.4, truth);
    InitialCondition init;
    init.xi0 = {0.7, -0.2};
    init.eta0 = {0.1};
    init.model_init = ModelInitPolicy::Exact;
    SimConfig cfg;
    cfg.step_h = 1e-3;
    cfg.horizon_T = 1.0;
    const RefFn ref = constant_ref(2, 0.5);

    const auto a = run_closed_loop(truth, setup, ref, init, cfg);
    const auto b = run_closed_loop(truth, setup, ref, init, cfg);
    REQUIRE(a.u.size() == b.u.size());
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        CHECK(a.u[i] == b.u[i]);
        CHECK(a.xi[0][i] == b.xi[0][i]);
    }
    CHECK(a.rhs_evaluations == 4 * 1000);
}

TEST_CASE("nominal asymptotic tracking of a smooth reference") {
    const plant::PlantDynamics truth = plant::double_integrator();
    const auto setup = toy_setup(controllers::Mode::MfcEfficient, 0.5, truth);

    const reference::Transition tr{2.0, 1.0, 5.0};
    const auto signal = reference::ReferenceSignal::from_transitions(0.0, {&tr, 1}, 2);
    const RefFn ref = [signal](double t) { return signal.sample(t); };

    InitialCondition init;
    init.xi0 = {0.0, 0.0};  // consistent with xi_d(0)
    init.model_init = ModelInitPolicy::Consistent;
    SimConfig cfg;
    cfg.step_h = 1e-3;
    cfg.horizon_T = 20.0;

    const auto result = run_closed_loop(truth, setup, ref, init, cfg);
    const auto metrics = extract_metrics(result, 0.25);
    CHECK(metrics.tail_tracking_error <= 1e-6);
    CHECK(metrics.settled);
}

TEST_CASE("efficient and classical runs produce the same control sequence") {
    plant::PlantDynamics truth = plant::toy_nonlinear_internal();
    truth.delta = [](std::span<const double> xi, auto, double t) {
        return 0.3 * std::sin(3.0 * t) + 0.05 * xi[0];
    };
    const auto eff = toy_setup(controllers::Mode::MfcEfficient, 0.25, truth);
    const auto cls = toy_setup(controllers::Mode::MfcClassical, 0.25, truth);

    InitialCondition init;
    init.xi0 = {1.5, 0.3};
    init.eta0 = {-0.4};
    init.model_init = ModelInitPolicy::Exact;

    const reference::Transition tr{1.0, 2.0, 4.0};
    const auto signal = reference::ReferenceSignal::from_transitions(0.5, {&tr, 1}, 2);
    const RefFn ref = [signal](double t) { return signal.sample(t); };

    SimConfig cfg;
    cfg.step_h = 1e-3;
    cfg.horizon_T = 8.0;

    const auto run_eff = run_closed_loop(truth, eff, ref, init, cfg);
    const auto run_cls = run_closed_loop(truth, cls, ref, init, cfg);
    REQUIRE(run_eff.u.size() == run_cls.u.size());

    double max_u = 0.0, max_dev = 0.0;
    for (std::size_t i = 0; i < run_eff.u.size(); ++i) {
        max_u = std::max(max_u, std::abs(run_eff.u[i]));
        max_dev = std::max(max_dev, std::abs(run_eff.u[i] - run_cls.u[i]));
    }
    CHECK(max_dev <= 1e-9 * max_u);
    CHECK(run_cls.controller_state_count == 3);  // xi* and eta*
    CHECK(run_eff.controller_state_count == 2);
}

TEST_CASE("theorem-1 toy scenario stays within the predicted radius") {
    const plant::PerturbationBound bound{0.5, 0.1};
    const plant::PlantDynamics truth = plant::perturbed_double_integrator(0.5, 0.1, 2.0);
    controllers::GainDesign base = controllers::make_gain_design({1.0, 2.0}, 0.5);
    const double r_d = 1e-12;
    const double r_inf = 0.1;
    const auto bounds = controllers::epsilon_bounds(base, bound, r_d, r_inf);
    const double eps = 0.99 * bounds.precision;

    auto setup = toy_setup(controllers::Mode::MfcEfficient, eps, truth);
    const double predicted = controllers::ultimate_radius(setup.design, bound, r_d);
    CHECK(predicted < r_inf);

    InitialCondition init;
    init.xi0 = {3.0, -2.0};
    init.model_init = ModelInitPolicy::Exact;
    SimConfig cfg;
    cfg.step_h = 1e-3;
    cfg.horizon_T = 60.0;
    const RefFn ref = constant_ref(2, 0.0);

    const auto result = run_closed_loop(truth, setup, ref, init, cfg);
    const auto metrics = extract_metrics(result, 0.25);
    CHECK(metrics.tail_tracking_error <= predicted);
    CHECK(metrics.tail_tracking_error <= r_inf);
}

TEST_CASE("metric extraction") {
    SimResult r;
    r.times = {0.0, 1.0, 2.0, 3.0};
    r.xi = {{0.0, 0.0, 0.0, 0.0}};
    r.ref_xi = {{0.0, 0.0, 0.0, 0.0}};
    r.u = {3.0, 3.0, 3.0, 3.0};
    auto m = extract_metrics(r, 0.25);
    CHECK(m.sup_abs_u == 3.0);

    r.u = {5.0, -5.0, 5.0, -5.0};
    m = extract_metrics(r, 0.25);
    CHECK(m.sup_abs_u == 5.0);

    CHECK_THROWS_AS(extract_metrics(SimResult{}, 0.25), std::invalid_argument);
}

TEST_CASE("guard trip aborts cleanly and truncates the series") {
    // Single-loop with a destabilising Lipschitz perturbation.
    plant::PlantDynamics truth = plant::double_integrator();
    truth.delta = [](std::span<const double> xi, auto, double) { return 3.0 * xi[0]; };
    auto setup = toy_setup(controllers::Mode::SingleLoop, 0.9, truth);

    InitialCondition init;
    init.xi0 = {2.0, -1.0};
    SimConfig cfg;
    cfg.step_h = 1e-3;
    cfg.horizon_T = 15.0;
    cfg.state_guard = 1e3;
    const RefFn ref = constant_ref(2, 0.0);

    const auto result = run_closed_loop(truth, setup, ref, init, cfg);
    CHECK(result.aborted);
    CHECK(result.abort_reason == "state guard exceeded");
    CHECK(result.abort_time < 15.0);
    CHECK(result.times.back() <= result.abort_time);
    for (double u : result.u) CHECK(std::isfinite(u));
}

TEST_CASE("peaking experiment degenerates to equality for a consistent grid") {
    const plant::PlantDynamics truth = plant::perturbed_double_integrator(0.2, 0.0, 1.0);
    auto setup = toy_setup(controllers::Mode::MfcEfficient, 0.2, truth);

    const RefFn ref = constant_ref(2, 1.0);
    InitialCondition base;
    base.xi0 = {1.0, 0.0};  // equals xi_d(0) for the constant reference

    SimConfig cfg;
    cfg.step_h = 1e-3;
    cfg.horizon_T = 5.0;

    const std::vector<std::vector<double>> grid{{1.0, 0.0}};
    const double eps_list[] = {0.2};
    const auto table = peaking_experiment(truth, setup, ref, base, grid, eps_list, cfg);
    REQUIRE(table.entries.size() == 1);
    const auto& entry = table.entries[0];
    CHECK(entry.mfc_max_sup_u ==
          doctest::Approx(entry.sl_max_sup_u).epsilon(1e-9));
    CHECK_FALSE(entry.any_guard_trip);
}

TEST_CASE("box grid spans the requested cube") {
    const double center[] = {1.0, 0.0};
    const double half[] = {2.0, 2.0};
    const auto grid = box_grid(center, half, 5);
    CHECK(grid.size() == 25);
    double lo0 = 1e9, hi0 = -1e9;
    for (const auto& p : grid) {
        lo0 = std::min(lo0, p[0]);
        hi0 = std::max(hi0, p[0]);
    }
    CHECK(lo0 == doctest::Approx(-1.0));
    CHECK(hi0 == doctest::Approx(3.0));

    const auto single = box_grid(center, half, 1);
    CHECK(single.size() == 1);
    CHECK(single[0][0] == 1.0);
}

TEST_CASE("online reference gate rejects lookahead providers") {
    const plant::PlantDynamics truth = plant::double_integrator();
    const auto setup = toy_setup(controllers::Mode::MfcEfficient, 0.5, truth);
    InitialCondition init;
    init.xi0 = {0.0, 0.0};
    SimConfig cfg;
    cfg.step_h = 0.1;
    cfg.horizon_T = 1.0;

    // A provider that internally peeks far ahead cannot be detected, but
    // the loop itself must never query beyond t + h; exercise the gate by
    // driving the loop normally and confirming no throw.
    const RefFn ref = constant_ref(2, 0.0);
    CHECK_NOTHROW(run_closed_loop(truth, setup, ref, init, cfg));
}
