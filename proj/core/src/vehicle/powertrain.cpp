#include "mfc/vehicle/powertrain.hpp"

#include <cmath>

namespace mfc::vehicle {
namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

double abs_kappa(double g, double kappa) { return std::sqrt(g * g + kappa * kappa); }

double max_kappa(double g1, double g2, double kappa) {
    return 0.5 * (g1 + g2 + abs_kappa(g1 - g2, kappa));
}

}  // namespace

void VehicleParams::validate() const {
    require(tau_m > 0 && i_G > 0 && J_c > 0 && k_c > 0 && d_c > 0 && J_r > 0, "drivetrain parameters must be positive");
    require(C_r > 0 && B_r > 0, "tire parameters must be positive");
    require(m > 0 && g > 0 && l_f > 0 && l_r > 0 && rho_a > 0 && r_r > 0 && c_w > 0 && A_st > 0,
            "vehicle parameters must be positive");
    require(c_F >= 0, "friction coefficient c_F must be nonnegative");
    require(mu > 0 && mu <= 1, "road friction mu must lie in (0, 1]");
    require(kappa > 0, "slip smoothing kappa must be positive");
}

void TireEstimates::validate() const {
    require(mu_hat > 0 && mu_hat <= 1, "mu_hat must lie in (0, 1]");
    require(B_hat > 0 && C_hat > 0, "tire estimates must be positive");
}

double smooth_slip(double omega_r, double v_x, double r_r, double kappa) {
    require(kappa > 0, "slip smoothing kappa must be positive");
    const double peripheral = r_r * omega_r;
    const double v_nr = max_kappa(abs_kappa(peripheral, kappa), abs_kappa(v_x, kappa), kappa);
    return (peripheral - v_x) / v_nr;
}

double pacejka_force(double mu, double F_z, double B, double C, double lambda) {
    require(F_z >= 0, "normal force must be nonnegative");
    return mu * F_z * std::sin(C * std::atan(B * lambda));
}

double rear_normal_force(const VehicleParams& p) { return p.m * p.g * p.l_f / (p.l_f + p.l_r); }

PowertrainState powertrain_rhs(const VehicleParams& p, const PowertrainState& s, double T_md,
                               double mu_t) {
    const double T_r = p.k_c * s.phi_c + p.d_c * (s.omega_c / p.i_G - s.omega_r);
    const double lambda = smooth_slip(s.omega_r, s.v_x, p.r_r, p.kappa);
    const double F_xr = pacejka_force(mu_t, rear_normal_force(p), p.B_r, p.C_r, lambda);
    const double F_w = 0.5 * p.rho_a * p.c_w * p.A_st * s.v_x * std::abs(s.v_x);

    PowertrainState d;
    d.T_m = (T_md - s.T_m) / p.tau_m;
    d.phi_c = s.omega_c / p.i_G - s.omega_r;
    d.omega_c = (s.T_m - 2.0 * T_r / p.i_G - p.c_F * s.omega_c) / p.J_c;
    d.omega_r = (2.0 * T_r - p.r_r * F_xr) / p.J_r;
    d.v_x = (F_xr - F_w) / p.m;
    return d;
}

ByrnesCoefficients byrnes_coefficients(const VehicleParams& p) {
    p.validate();
    const double denom = p.i_G * p.i_G * p.J_c * p.J_r * p.tau_m;
    ByrnesCoefficients c{};
    c.p1 = ((4.0 * p.d_c * p.d_c - 2.0 * p.J_r * p.k_c) * p.tau_m - 2.0 * p.J_r * p.d_c) / denom;
    c.p2 = -(2.0 * p.J_r * p.tau_m * p.d_c + p.i_G * p.i_G * p.J_c * p.J_r) / denom;
    c.p3 = ((2.0 * p.J_r * p.k_c - 4.0 * p.d_c * p.d_c) * p.tau_m + 2.0 * p.J_r * p.d_c) / denom;
    c.p_c = (4.0 * p.tau_m * p.d_c * p.k_c - 2.0 * p.J_r * p.k_c) / denom;
    c.p_r = -2.0 * p.d_c * p.r_r / (p.i_G * p.i_G * p.J_c * p.J_r);
    c.b = 1.0 / (p.i_G * p.J_c * p.tau_m);
    return c;
}

double trivial_observer_rate(double xi1, double eta2) { return xi1 - eta2; }

plant::FullState to_byrnes(const VehicleParams& p, const PowertrainState& s) {
    const double T_r = p.k_c * s.phi_c + p.d_c * (s.omega_c / p.i_G - s.omega_r);
    plant::FullState out;
    out.xi = {s.omega_c / p.i_G,
              (s.T_m - 2.0 * T_r / p.i_G - p.c_F * s.omega_c) / (p.i_G * p.J_c)};
    out.eta = {s.phi_c, s.omega_r, s.v_x};
    return out;
}

PowertrainState from_byrnes(const VehicleParams& p, std::span<const double> xi,
                            std::span<const double> eta) {
    require(xi.size() == 2 && eta.size() == 3, "Byrnes state has n_xi = 2 and n_eta = 3");
    PowertrainState s;
    s.omega_c = p.i_G * xi[0];
    s.phi_c = eta[0];
    s.omega_r = eta[1];
    s.v_x = eta[2];
    const double T_r = p.k_c * s.phi_c + p.d_c * (xi[0] - s.omega_r);
    s.T_m = p.i_G * p.J_c * xi[1] + 2.0 * T_r / p.i_G + p.c_F * s.omega_c;
    return s;
}

}  // namespace mfc::vehicle
