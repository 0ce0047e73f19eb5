#include <doctest.h>

#include <cmath>
#include <random>

#include "mfc/plant/plant.hpp"

using namespace mfc::plant;

TEST_CASE("brunovsky pair structure") {
    auto [a2, b2] = brunovsky_pair(2);
    CHECK(a2(0, 1) == 1.0);
    CHECK(a2(0, 0) == 0.0);
    CHECK(a2(1, 0) == 0.0);
    CHECK(a2(1, 1) == 0.0);
    CHECK(b2(0, 0) == 0.0);
    CHECK(b2(1, 0) == 1.0);

    auto [a1, b1] = brunovsky_pair(1);
    CHECK(a1(0, 0) == 0.0);
    CHECK(b1(0, 0) == 1.0);

    auto [a3, b3] = brunovsky_pair(3);
    CHECK(a3(0, 1) == 1.0);
    CHECK(a3(1, 2) == 1.0);
    CHECK(a3(2, 0) == 0.0);
    CHECK(b3(2, 0) == 1.0);
    CHECK(b3(0, 0) == 0.0);

    CHECK_THROWS_AS(brunovsky_pair(0), InvalidDimension);
}

TEST_CASE("plant rhs of the chain") {
    const PlantDynamics di = double_integrator();
    const FullState s{{1.0, 2.0}, {}};
    const FullState d = plant_rhs(di, s, 3.0, 0.0);
    CHECK(d.xi[0] == 2.0);
    CHECK(d.xi[1] == 3.0);

    const FullState origin{{0.0, 0.0}, {}};
    const FullState d0 = plant_rhs(di, origin, 0.0, 0.0);
    CHECK(d0.xi[0] == 0.0);
    CHECK(d0.xi[1] == 0.0);

    const PlantDynamics toy = perturbed_double_integrator(0.5, 0.1, 1.0);
    const FullState s2{{1.0, 0.0}, {}};
    const FullState d2 = plant_rhs(toy, s2, 0.0, 0.0);
    CHECK(d2.xi[0] == 0.0);
    CHECK(d2.xi[1] == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("nonlinearity only enters the last external row") {
    const PlantDynamics toy = toy_nonlinear_internal();
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss(0.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const FullState s{{gauss(rng), gauss(rng)}, {gauss(rng)}};
        const double u = gauss(rng);
        const FullState d = plant_rhs(toy, s, u, 0.3 * trial);
        CHECK(d.xi[0] == s.xi[1]);
    }
}

TEST_CASE("plant rhs is deterministic") {
    const PlantDynamics toy = toy_nonlinear_internal();
    const FullState s{{0.7, -1.3}, {0.4}};
    const FullState a = plant_rhs(toy, s, 2.5, 1.25);
    const FullState b = plant_rhs(toy, s, 2.5, 1.25);
    CHECK(a.xi[1] == b.xi[1]);
    CHECK(a.eta[0] == b.eta[0]);
}

TEST_CASE("gain floor violation is reported") {
    PlantDynamics p = double_integrator();
    p.b = [](auto, auto) { return 0.1; };
    p.b_floor = 0.5;
    const FullState s{{0.0, 0.0}, {}};
    CHECK_THROWS_AS(plant_rhs(p, s, 0.0, 0.0), GainFloorViolated);
}

TEST_CASE("perturbation bound check") {
    const PlantDynamics quiet = double_integrator();
    std::vector<std::pair<FullState, double>> samples{{FullState{{1.0, 2.0}, {}}, 0.0},
                                                      {FullState{{-3.0, 0.5}, {}}, 4.0}};
    CHECK(check_perturbation_bound(quiet, {0.0, 0.0}, samples));

    const PlantDynamics toy = perturbed_double_integrator(0.5, 0.1, 1.0);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> uni(-5.0, 5.0);
    std::vector<std::pair<FullState, double>> random_samples;
    for (int i = 0; i < 200; ++i)
        random_samples.push_back({FullState{{uni(rng), uni(rng)}, {}}, std::abs(uni(rng))});
    CHECK(check_perturbation_bound(toy, {0.5, 0.1}, random_samples));

    PlantDynamics quadratic = double_integrator();
    quadratic.delta = [](std::span<const double> xi, auto, double) { return xi[0] * xi[0]; };
    std::vector<std::pair<FullState, double>> bad{{FullState{{2.0, 0.0}, {}}, 0.0}};
    CHECK_FALSE(check_perturbation_bound(quadratic, {0.0, 1.0}, bad));

    CHECK_THROWS_AS(check_perturbation_bound(quiet, {0.0, 0.0}, {}), std::invalid_argument);
}
