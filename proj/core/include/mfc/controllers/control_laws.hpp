#pragma once

#include <optional>
#include <string>

#include "mfc/controllers/gain_design.hpp"
#include "mfc/ctrlmath/margins.hpp"
#include "mfc/plant/plant.hpp"
#include "mfc/reference/reference.hpp"

namespace mfc::controllers {

enum class Mode {
    MfcEfficient,   // linear integrator-chain MCL, high-gain PCL
    MfcClassical,   // nonlinear-model MCL, high-gain PCL
    SingleLoop,     // high-gain feedback of xi - xi_d
    PiMfc,          // linear MCL, PI output feedback in the PCL
    PiSingleLoop,   // PI output feedback of y - y_d
};

std::string to_string(Mode mode);
std::optional<Mode> mode_from_string(const std::string& name);
bool mode_has_mcl(Mode mode);
bool mode_has_pi(Mode mode);

// PI auxiliary law constants, v = -a0 e1 - a1 e2 + b0 w with the PI
// controller w = kp (-e1) + ki * integral, integral' = -e1.
struct PiGains {
    double a0 = 0.0;
    double a1 = 0.0;
    double b0 = 1.0;
    double kp = 0.0;
    double ki = 0.0;
};

// (v, integral_rate) for error e = (e1, e2) and the current integral state.
std::pair<double, double> pi_auxiliary(const PiGains& g, double e1, double e2, double integral);

// Open loop of the PI design: C(s) G(s) with C = kp + ki/s and
// G(s) = b0 / (s^2 + a1 s + a0).
ctrlmath::RationalTransfer pi_open_loop(const PiGains& g);

// Controller-internal ODE state owned by the simulation loop.
struct ControllerState {
    Mode mode = Mode::MfcEfficient;
    std::vector<double> xi_star;   // MCL external state (modes with an MCL)
    std::vector<double> eta_star;  // MCL internal state (classical mode only)
    double pi_integral = 0.0;      // PI modes only
    std::optional<double> observer;  // eta_1 estimate when the scenario uses one
};

// One controller evaluation: the plant input, its decomposition, and the
// time derivatives of every controller-internal state.
struct ControlOutput {
    double u = 0.0;
    double v_star = 0.0;
    double v_tilde = 0.0;
    std::optional<double> u_star;   // classical decomposition
    std::optional<double> u_tilde;  // classical decomposition
    std::vector<double> mcl_xi_dot;
    std::vector<double> mcl_eta_dot;
    double pi_integral_rate = 0.0;
    double observer_rate = 0.0;
};

// Everything the control laws know about the process: the nominal model
// (a PlantDynamics with Delta = 0) plus gains. The simulation owns state
// integration; all laws here are pure in (state, measurement, reference).
struct ControllerSetup {
    Mode mode = Mode::MfcEfficient;
    GainDesign design;
    std::optional<PiGains> pi;
    plant::PlantDynamics nominal;
    bool use_observer = false;
};

// Model-following control, Mode::MfcEfficient or Mode::MfcClassical.
ControlOutput mfc_control(const ControllerSetup& setup, const ControllerState& state,
                          const plant::FullState& meas, const reference::DesiredState& ref);

// Single-loop high-gain feedback of xi - xi_d.
ControlOutput single_loop_control(const ControllerSetup& setup, const ControllerState& state,
                                  const plant::FullState& meas,
                                  const reference::DesiredState& ref);

// PI variants (Mode::PiMfc / Mode::PiSingleLoop).
ControlOutput pi_control(const ControllerSetup& setup, const ControllerState& state,
                         const plant::FullState& meas, const reference::DesiredState& ref);

// Dispatch on setup.mode.
ControlOutput evaluate_control(const ControllerSetup& setup, const ControllerState& state,
                               const plant::FullState& meas, const reference::DesiredState& ref);

// Number of controller-internal ODE states integrated at run time for the
// given mode (excluding an optional observer, which adds one when present).
std::size_t controller_cost(Mode mode, std::size_t n_xi, std::size_t n_eta);

}  // namespace mfc::controllers
