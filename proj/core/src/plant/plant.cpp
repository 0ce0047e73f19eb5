#include "mfc/plant/plant.hpp"

#include <cmath>

namespace mfc::plant {

std::pair<ctrlmath::Matrix, ctrlmath::Matrix> brunovsky_pair(std::size_t n_xi) {
    if (n_xi < 1) throw InvalidDimension("Brunovsky pair needs n_xi >= 1");
    ctrlmath::Matrix a(n_xi, n_xi);
    for (std::size_t i = 0; i + 1 < n_xi; ++i) a(i, i + 1) = 1.0;
    ctrlmath::Matrix b(n_xi, 1);
    b(n_xi - 1, 0) = 1.0;
    return {a, b};
}

void plant_rhs_into(const PlantDynamics& plant, std::span<const double> xi,
                    std::span<const double> eta, double u, double t, std::span<double> xi_dot,
                    std::span<double> eta_dot) {
    if (xi.size() != plant.n_xi || eta.size() != plant.n_eta)
        throw InvalidDimension("state dimensions do not match the plant");

    const double b_val = plant.b(xi, eta);
    if (std::abs(b_val) < plant.b_floor)
        throw GainFloorViolated("input gain fell below the declared floor b_m");

    const double a_val = plant.a(xi, eta);
    const double d_val = plant.delta ? plant.delta(xi, eta, t) : 0.0;

    for (std::size_t i = 0; i + 1 < plant.n_xi; ++i) xi_dot[i] = xi[i + 1];
    xi_dot[plant.n_xi - 1] = a_val + b_val * u + d_val;

    if (plant.n_eta > 0) plant.q(xi, eta, eta_dot);
}

FullState plant_rhs(const PlantDynamics& plant, const FullState& state, double u, double t) {
    FullState out;
    out.xi.resize(plant.n_xi);
    out.eta.resize(plant.n_eta);
    plant_rhs_into(plant, state.xi, state.eta, u, t, out.xi, out.eta);
    return out;
}

bool check_perturbation_bound(const PlantDynamics& plant, const PerturbationBound& bound,
                              std::span<const std::pair<FullState, double>> samples) {
    if (samples.empty()) throw std::invalid_argument("perturbation check needs samples");
    for (const auto& [state, t] : samples) {
        const double d = plant.delta ? plant.delta(state.xi, state.eta, t) : 0.0;
        double xi_norm_sq = 0.0;
        for (double v : state.xi) xi_norm_sq += v * v;
        if (std::abs(d) > bound.delta0 + bound.lipschitz * std::sqrt(xi_norm_sq) + 1e-12)
            return false;
    }
    return true;
}

PlantDynamics double_integrator() {
    PlantDynamics p;
    p.n_xi = 2;
    p.n_eta = 0;
    p.a = [](auto, auto) { return 0.0; };
    p.b = [](auto, auto) { return 1.0; };
    p.b_floor = 0.5;
    p.name = "double-integrator";
    return p;
}

PlantDynamics perturbed_double_integrator(double delta0, double lipschitz, double freq) {
    PlantDynamics p = double_integrator();
    p.delta = [delta0, lipschitz, freq](std::span<const double> xi, auto, double t) {
        return delta0 * std::sin(freq * t) + lipschitz * xi[0];
    };
    p.name = "perturbed-double-integrator";
    return p;
}

PlantDynamics toy_nonlinear_internal() {
    PlantDynamics p;
    p.n_xi = 2;
    p.n_eta = 1;
    p.a = [](std::span<const double> xi, std::span<const double> eta) {
        return std::sin(xi[0]) + 0.5 * eta[0];
    };
    p.b = [](std::span<const double> xi, auto) { return 1.5 + 0.5 * std::sin(xi[0]); };
    p.q = [](std::span<const double> xi, std::span<const double> eta, std::span<double> eta_dot) {
        eta_dot[0] = -eta[0] + xi[0];
    };
    p.b_floor = 0.9;
    p.name = "toy-nonlinear-internal";
    return p;
}

}  // namespace mfc::plant
