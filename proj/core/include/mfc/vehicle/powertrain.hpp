#pragma once

#include <stdexcept>

#include "mfc/plant/plant.hpp"

namespace mfc::vehicle {

// Rear-wheel drive longitudinal vehicle with first-order engine lag and a
// torsional-spring drivetrain. SI units throughout; km/h and rpm appear
// only at the reporting boundary.
struct VehicleParams {
    double tau_m = 0.02;   // s, motor time constant
    double i_G = 4.49;     // total gear ratio
    double J_c = 0.23;     // kg m^2, crankshaft inertia
    double c_F = 0.003;    // N m/(rad/s), rotational friction
    double k_c = 5300.0;   // N m/rad, torsional stiffness
    double d_c = 15.0;     // N m s/rad, torsional damping
    double J_r = 3.0;      // kg m^2, rear axle inertia incl. wheels
    double C_r = 1.8;      // Pacejka shape factor
    double B_r = 10.3;     // Pacejka stiffness factor
    double m = 1950.0;     // kg
    double g = 9.81;       // m/s^2
    double l_f = 1.3;      // m, front axle to COG
    double l_r = 1.4;      // m, rear axle to COG
    double rho_a = 1.1;    // kg/m^3
    double r_r = 0.33;     // m, wheel radius
    double c_w = 0.3;      // aerodynamic drag coefficient
    double A_st = 2.37;    // m^2, frontal area
    double mu = 1.0;       // tire-road friction, (0, 1]
    double kappa = 1e-6;   // slip smoothing

    void validate() const;
    static VehicleParams paper_rwd() { return {}; }
};

// Constant estimates of the uncertain tire parameters.
struct TireEstimates {
    double mu_hat = 0.9;
    double B_hat = 11.0;
    double C_hat = 1.9;
    void validate() const;
};

// State of the powertrain model in its physical coordinates.
struct PowertrainState {
    double T_m = 0.0;      // N m
    double phi_c = 0.0;    // rad
    double omega_c = 0.0;  // rad/s
    double omega_r = 0.0;  // rad/s
    double v_x = 0.0;      // m/s
};

// Coefficients of the Byrnes-Isidori form of the powertrain with input
// gain b = 1/(i_G J_c tau_m).
struct ByrnesCoefficients {
    double p1, p2, p3, p_c, p_r, b;
};

// Smooth wheel slip (r_r w_r - v_x) / max_k{|r_r w_r|_k, |v_x|_k} with the
// kappa-regularised absolute value |g|_k = sqrt(g^2 + kappa^2).
double smooth_slip(double omega_r, double v_x, double r_r, double kappa);

// Pacejka magic formula F_x = mu F_z sin(C arctan(B lambda)).
double pacejka_force(double mu, double F_z, double B, double C, double lambda);

// Static rear-axle normal force m g l_f / (l_f + l_r).
double rear_normal_force(const VehicleParams& p);

// Right-hand side of the five powertrain equations with requested torque
// T_md and the current road friction mu_t.
PowertrainState powertrain_rhs(const VehicleParams& p, const PowertrainState& s, double T_md,
                               double mu_t);

ByrnesCoefficients byrnes_coefficients(const VehicleParams& p);

// Trivial twist-angle observer rate, eta_hat_1' = xi_1 - eta_2. The
// estimate error has zero derivative, so error(t) = error(0).
double trivial_observer_rate(double xi1, double eta2);

// Coordinate maps between the physical state and (xi, eta). Exact inverses
// of each other.
plant::FullState to_byrnes(const VehicleParams& p, const PowertrainState& s);
PowertrainState from_byrnes(const VehicleParams& p, std::span<const double> xi,
                            std::span<const double> eta);

}  // namespace mfc::vehicle
