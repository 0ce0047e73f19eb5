#include "mfc/vehicle/case_study.hpp"

#include <algorithm>
#include <cmath>

namespace mfc::vehicle {

double StepSchedule::at(double t) const {
    double value = base;
    for (const auto& [time, v] : steps) {
        if (t >= time) value = v;
    }
    return value;
}

CaseStudySystem::CaseStudySystem(VehicleParams params, TireEstimates estimates, StepSchedule mu,
                                 StepSchedule mu_hat)
    : params_(std::move(params)), estimates_(std::move(estimates)), mu_(std::move(mu)),
      mu_hat_(std::move(mu_hat)) {
    params_.validate();
    estimates_.validate();
    if (mu_.base <= 0.0) mu_.base = params_.mu;
    if (mu_hat_.base <= 0.0) mu_hat_.base = estimates_.mu_hat;
    for (double prev = 0.0; const auto& [time, value] : mu_.steps) {
        if (time <= prev) throw std::invalid_argument("mu schedule times must increase");
        if (value <= 0.0 || value > 1.0) throw std::invalid_argument("scheduled mu must lie in (0,1]");
        prev = time;
    }
    for (double prev = 0.0; const auto& [time, value] : mu_hat_.steps) {
        if (time <= prev) throw std::invalid_argument("mu_hat schedule times must increase");
        if (value <= 0.0 || value > 1.0)
            throw std::invalid_argument("scheduled mu_hat must lie in (0,1]");
        prev = time;
    }
    coeffs_ = byrnes_coefficients(params_);
}

plant::PlantDynamics CaseStudySystem::nominal_model(double mu_hat) const {
    const VehicleParams p = params_;
    const TireEstimates est = estimates_;
    const ByrnesCoefficients c = coeffs_;
    const double F_zr = rear_normal_force(p);

    auto tire_estimate = [p, est, mu_hat, F_zr](std::span<const double> eta) {
        const double lambda = smooth_slip(eta[1], eta[2], p.r_r, p.kappa);
        return pacejka_force(mu_hat, F_zr, est.B_hat, est.C_hat, lambda);
    };

    plant::PlantDynamics model;
    model.n_xi = 2;
    model.n_eta = 3;
    model.name = "vehicle-nominal";
    model.a = [c, tire_estimate](std::span<const double> xi, std::span<const double> eta) {
        return c.p1 * xi[0] + c.p2 * xi[1] + c.p3 * eta[1] + c.p_r * tire_estimate(eta) +
               c.p_c * eta[0];
    };
    model.b = [b = c.b](auto, auto) { return b; };
    model.b_floor = 0.5 * c.b;
    model.q = [p, tire_estimate](std::span<const double> xi, std::span<const double> eta,
                                 std::span<double> eta_dot) {
        const double F_hat = tire_estimate(eta);
        const double F_w = 0.5 * p.rho_a * p.c_w * p.A_st * eta[2] * std::abs(eta[2]);
        eta_dot[0] = xi[0] - eta[1];
        eta_dot[1] = (2.0 * p.d_c * (xi[0] - eta[1]) + 2.0 * p.k_c * eta[0] - p.r_r * F_hat) / p.J_r;
        eta_dot[2] = (F_hat - F_w) / p.m;
    };
    return model;
}

plant::PlantDynamics CaseStudySystem::truth_plant(double mu, double mu_hat) const {
    const VehicleParams p = params_;
    const TireEstimates est = estimates_;
    const ByrnesCoefficients c = coeffs_;
    const double F_zr = rear_normal_force(p);

    auto tire_true = [p, mu, F_zr](std::span<const double> eta) {
        const double lambda = smooth_slip(eta[1], eta[2], p.r_r, p.kappa);
        return pacejka_force(mu, F_zr, p.B_r, p.C_r, lambda);
    };
    auto tire_estimate = [p, est, mu_hat, F_zr](std::span<const double> eta) {
        const double lambda = smooth_slip(eta[1], eta[2], p.r_r, p.kappa);
        return pacejka_force(mu_hat, F_zr, est.B_hat, est.C_hat, lambda);
    };

    plant::PlantDynamics truth = nominal_model(mu_hat);
    truth.name = "vehicle-truth";
    // Delta restores the true forcing: tire mismatch plus friction losses.
    truth.delta = [p, c, tire_true, tire_estimate](std::span<const double> xi,
                                                   std::span<const double> eta, double) {
        return c.p_r * (tire_true(eta) - tire_estimate(eta)) -
               (p.c_F / p.J_c) * (xi[0] / p.tau_m + xi[1]);
    };
    truth.q = [p, tire_true](std::span<const double> xi, std::span<const double> eta,
                             std::span<double> eta_dot) {
        const double F_xr = tire_true(eta);
        const double F_w = 0.5 * p.rho_a * p.c_w * p.A_st * eta[2] * std::abs(eta[2]);
        eta_dot[0] = xi[0] - eta[1];
        eta_dot[1] = (2.0 * p.d_c * (xi[0] - eta[1]) + 2.0 * p.k_c * eta[0] - p.r_r * F_xr) / p.J_r;
        eta_dot[2] = (F_xr - F_w) / p.m;
    };
    return truth;
}

sim::Schedule CaseStudySystem::schedule() const {
    // Merge step times of both schedules into epochs.
    std::vector<double> times;
    for (const auto& [t, v] : mu_.steps) times.push_back(t);
    for (const auto& [t, v] : mu_hat_.steps) times.push_back(t);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    sim::Schedule s;
    for (double t : times) {
        const double mu = mu_.at(t);
        const double mu_hat = mu_hat_.at(t);
        s.epochs.push_back({t, truth_plant(mu, mu_hat), nominal_model(mu_hat)});
    }
    return s;
}

double CaseStudySystem::implied_delta(std::span<const double> xi, std::span<const double> eta,
                                      double t, double observer_offset) const {
    const double F_zr = rear_normal_force(params_);
    const double lambda = smooth_slip(eta[1], eta[2], params_.r_r, params_.kappa);
    const double F_true = pacejka_force(mu_.at(t), F_zr, params_.B_r, params_.C_r, lambda);
    const double F_hat =
        pacejka_force(mu_hat_.at(t), F_zr, estimates_.B_hat, estimates_.C_hat, lambda);
    return coeffs_.p_r * (F_true - F_hat) + coeffs_.p_c * observer_offset -
           (params_.c_F / params_.J_c) * (xi[0] / params_.tau_m + xi[1]);
}

sim::InitialCondition CaseStudySystem::initial_condition(double v_x0) const {
    const double wheel = v_x0 / params_.r_r;
    sim::InitialCondition init;
    init.xi0 = {wheel, 0.0};
    init.eta0 = {0.0, wheel, v_x0};
    init.model_init = sim::ModelInitPolicy::Exact;
    init.observer0 = 0.0;
    return init;
}

CaseStudySystem build_case_study_plant(VehicleParams params, TireEstimates estimates,
                                       StepSchedule mu_schedule, StepSchedule mu_hat_schedule) {
    return CaseStudySystem(std::move(params), std::move(estimates), std::move(mu_schedule),
                           std::move(mu_hat_schedule));
}

plant::PerturbationBound fit_perturbation_bound(const CaseStudySystem& system, double v_lo_kmh,
                                                double v_hi_kmh, double xi2_max, double phi_max,
                                                double observer_offset,
                                                std::size_t samples_per_axis) {
    const VehicleParams& p = system.params();
    const double w_lo = kmh_to_mps(v_lo_kmh) / p.r_r;
    const double w_hi = kmh_to_mps(v_hi_kmh) / p.r_r;

    // Collect (||xi||, |Delta|) samples over the operating box, worst case
    // over every regime of the friction schedules.
    std::vector<double> regime_times{0.0};
    for (const auto& [t, v] : system.mu_schedule().steps) regime_times.push_back(t);
    for (const auto& [t, v] : system.mu_hat_schedule().steps) regime_times.push_back(t);
    std::sort(regime_times.begin(), regime_times.end());
    regime_times.erase(std::unique(regime_times.begin(), regime_times.end()), regime_times.end());

    std::vector<std::pair<double, double>> pts;
    const std::size_t n = std::max<std::size_t>(samples_per_axis, 2);
    auto lerp = [](double a, double b, double f) { return a + (b - a) * f; };
    for (std::size_t i1 = 0; i1 < n; ++i1) {
        const double xi1 = lerp(w_lo, w_hi, double(i1) / double(n - 1));
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            const double xi2 = lerp(-xi2_max, xi2_max, double(i2) / double(n - 1));
            for (std::size_t i3 = 0; i3 < n; ++i3) {
                const double phi = lerp(-phi_max, phi_max, double(i3) / double(n - 1));
                for (std::size_t i4 = 0; i4 < n; ++i4) {
                    // Wheel speed around the crank-normalised speed, +/- 5%.
                    const double eta2 = xi1 * lerp(0.95, 1.05, double(i4) / double(n - 1));
                    for (std::size_t i5 = 0; i5 < n; ++i5) {
                        // Slip-consistent vehicle speeds around r_r * eta2.
                        const double eta3 =
                            p.r_r * eta2 * lerp(0.9, 1.1, double(i5) / double(n - 1));
                        const double xi[] = {xi1, xi2};
                        const double eta[] = {phi, eta2, eta3};
                        double worst = 0.0;
                        for (double t : regime_times)
                            worst = std::max(worst, std::abs(system.implied_delta(
                                                        xi, eta, t, observer_offset)));
                        pts.emplace_back(std::hypot(xi1, xi2), worst);
                    }
                }
            }
        }
    }

    // Least-max envelope: among lines through pairs of upper-hull samples
    // (plus the flat and the through-origin line), pick the feasible one
    // with the smallest delta0 + lipschitz * mean||xi||.
    double y_max = 0.0, x_at_ymax = 0.0, x_mean = 0.0;
    for (const auto& [x, y] : pts) {
        if (y > y_max) {
            y_max = y;
            x_at_ymax = x;
        }
        x_mean += x;
    }
    x_mean /= double(pts.size());

    auto feasible = [&](double d0, double lip) {
        if (d0 < 0.0 || lip < 0.0) return false;
        for (const auto& [x, y] : pts)
            if (y > d0 + lip * x + 1e-12) return false;
        return true;
    };

    plant::PerturbationBound best{y_max, 0.0};
    double best_cost = best.delta0 + best.lipschitz * x_mean;
    // Reduce to the upper envelope candidates to keep the pair scan small.
    std::vector<std::pair<double, double>> hull;
    for (const auto& pt : pts) {
        bool dominated = false;
        for (const auto& other : pts)
            if (other.first <= pt.first && other.second > pt.second + 1e-15) {
                dominated = true;
                break;
            }
        if (!dominated) hull.push_back(pt);
    }
    for (std::size_t i = 0; i < hull.size(); ++i) {
        // Through-origin candidate.
        if (hull[i].first > 0.0) {
            const double lip = hull[i].second / hull[i].first;
            if (feasible(0.0, lip) && lip * x_mean < best_cost) {
                best = {0.0, lip};
                best_cost = lip * x_mean;
            }
        }
        for (std::size_t j = i + 1; j < hull.size(); ++j) {
            const double dx = hull[j].first - hull[i].first;
            if (std::abs(dx) < 1e-12) continue;
            const double lip = (hull[j].second - hull[i].second) / dx;
            const double d0 = hull[i].second - lip * hull[i].first;
            const double cost = d0 + lip * x_mean;
            if (cost < best_cost && feasible(d0, lip)) {
                best = {d0, lip};
                best_cost = cost;
            }
        }
    }
    (void)x_at_ymax;
    return best;
}

}  // namespace mfc::vehicle
