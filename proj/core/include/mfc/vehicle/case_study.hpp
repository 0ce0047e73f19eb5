#pragma once

#include "mfc/sim/closed_loop.hpp"
#include "mfc/vehicle/powertrain.hpp"

namespace mfc::vehicle {

// Piecewise-constant parameter schedule: base value, then step changes at
// the given times (strictly increasing).
struct StepSchedule {
    double base = 0.0;
    std::vector<std::pair<double, double>> steps;  // (time_s, value)

    double at(double t) const;
    bool empty() const { return steps.empty(); }
};

// The cruise-control case study assembled as a Byrnes-Isidori plant plus
// the nominal model every controller uses.
//
// The truth plant's last external row reproduces the powertrain dynamics
// exactly; its `a` is the controller-computable nominal nonlinearity
// (estimated tire force, nominal c_F = 0, eta_1 read from the supplied
// state) and `Delta` carries the tire mismatch and the friction losses.
// The constant observer-error contribution enters through the controller,
// which substitutes eta_hat_1 for eta_1.
class CaseStudySystem {
public:
    CaseStudySystem(VehicleParams params, TireEstimates estimates, StepSchedule mu,
                    StepSchedule mu_hat);

    const VehicleParams& params() const { return params_; }
    const TireEstimates& estimates() const { return estimates_; }
    const ByrnesCoefficients& coefficients() const { return coeffs_; }
    const StepSchedule& mu_schedule() const { return mu_; }
    const StepSchedule& mu_hat_schedule() const { return mu_hat_; }

    // Plant/model pair for fixed friction values.
    plant::PlantDynamics truth_plant(double mu, double mu_hat) const;
    plant::PlantDynamics nominal_model(double mu_hat) const;

    // Pair at the schedule's base values.
    plant::PlantDynamics truth_plant() const { return truth_plant(mu_.base, mu_hat_.base); }
    plant::PlantDynamics nominal_model() const { return nominal_model(mu_hat_.base); }

    // Epochs for every scheduled step change, empty when unscheduled.
    sim::Schedule schedule() const;

    // Implied perturbation Delta = p_r (F_xr - F_xr_hat)
    //   + p_c (eta_1(0) - eta_hat_1(0)) - (c_F/J_c)(xi_1/tau_m + xi_2),
    // evaluated with the scheduled friction values at time t.
    double implied_delta(std::span<const double> xi, std::span<const double> eta, double t,
                         double observer_offset) const;

    // Initial conditions for a run starting at vehicle speed v_x0 with
    // small load on the powertrain: xi0 = [v_x0/r_r, 0],
    // eta0 = [0, v_x0/r_r, v_x0], observer initialised at zero.
    sim::InitialCondition initial_condition(double v_x0) const;

private:
    VehicleParams params_;
    TireEstimates estimates_;
    StepSchedule mu_;
    StepSchedule mu_hat_;
    ByrnesCoefficients coeffs_;
};

CaseStudySystem build_case_study_plant(VehicleParams params, TireEstimates estimates,
                                       StepSchedule mu_schedule = {},
                                       StepSchedule mu_hat_schedule = {});

// Least-max linear envelope delta0 + lipschitz * ||xi|| covering |Delta|
// sampled over a box around the benchmark operating range. The box spans
// wheel speeds for [v_lo_kmh, v_hi_kmh], accelerations up to xi2_max and
// twist angles up to phi_max.
plant::PerturbationBound fit_perturbation_bound(const CaseStudySystem& system, double v_lo_kmh,
                                                double v_hi_kmh, double xi2_max, double phi_max,
                                                double observer_offset = 0.0,
                                                std::size_t samples_per_axis = 7);

constexpr double kmh_to_mps(double kmh) { return kmh / 3.6; }
constexpr double mps_to_kmh(double mps) { return mps * 3.6; }
constexpr double rad_s_to_rpm(double w) { return w * 60.0 / (2.0 * 3.14159265358979323846); }

}  // namespace mfc::vehicle
