#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mfc/ctrlmath/matrix.hpp"

namespace mfc::plant {

struct InvalidDimension : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when |b(xi, eta)| drops below the declared floor b_m, which signals
// a misconfigured plant rather than a run-time condition.
struct GainFloorViolated : std::domain_error {
    using std::domain_error::domain_error;
};

// External/internal state of a system in Byrnes-Isidori form.
struct FullState {
    std::vector<double> xi;
    std::vector<double> eta;
};

// Known scalars (delta, L_Delta) bounding the perturbation,
// |Delta(xi, eta, t)| <= delta0 + lipschitz * ||xi||_2.
struct PerturbationBound {
    double delta0 = 0.0;
    double lipschitz = 0.0;
};

using ScalarFn = std::function<double(std::span<const double> xi, std::span<const double> eta)>;
using PerturbationFn =
    std::function<double(std::span<const double> xi, std::span<const double> eta, double t)>;
using InternalFn = std::function<void(std::span<const double> xi, std::span<const double> eta,
                                      std::span<double> eta_dot)>;

// Single-input system in Byrnes-Isidori form,
//   xi_dot  = A xi + B (a(xi,eta) + b(xi,eta) u + Delta(xi,eta,t)),
//   eta_dot = q(xi,eta),
// with (A, B) the Brunovsky pair of dimension n_xi. All members are
// immutable after construction; evaluation is pure.
struct PlantDynamics {
    std::size_t n_xi = 0;
    std::size_t n_eta = 0;
    ScalarFn a;
    ScalarFn b;
    PerturbationFn delta;  // empty means identically zero
    InternalFn q;          // present exactly when n_eta > 0
    double b_floor = 0.0;  // b_m > 0
    std::string name;
};

// Brunovsky pair: A with ones on the superdiagonal, B = e_{n_xi}.
std::pair<ctrlmath::Matrix, ctrlmath::Matrix> brunovsky_pair(std::size_t n_xi);

// Right-hand side of the plant ODE at (state, u, t).
FullState plant_rhs(const PlantDynamics& plant, const FullState& state, double u, double t);

// In-place variant used by the integrator hot path.
void plant_rhs_into(const PlantDynamics& plant, std::span<const double> xi,
                    std::span<const double> eta, double u, double t, std::span<double> xi_dot,
                    std::span<double> eta_dot);

// True iff every sample satisfies |Delta| <= delta0 + lipschitz*||xi|| + 1e-12.
bool check_perturbation_bound(const PlantDynamics& plant, const PerturbationBound& bound,
                              std::span<const std::pair<FullState, double>> samples);

// --- toy plants for tests and the Theorem-1 benchmark ---

// xi_dot = [xi_2, u]; no internal state, no perturbation.
PlantDynamics double_integrator();

// Double integrator with Delta = delta0*sin(freq*t) + lipschitz*xi_1.
PlantDynamics perturbed_double_integrator(double delta0, double lipschitz, double freq);

// Nonlinear toy with one ISS internal state and state-dependent input gain:
//   a = sin(xi_1) + 0.5*eta_1, b = 1.5 + 0.5*sin(xi_1), eta_dot = -eta_1 + xi_1.
PlantDynamics toy_nonlinear_internal();

}  // namespace mfc::plant
