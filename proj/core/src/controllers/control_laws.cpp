#include "mfc/controllers/control_laws.hpp"

#include <array>
#include <cmath>

namespace mfc::controllers {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// dot(k, x - y) without materialising the difference.
double dot_diff(std::span<const double> k, std::span<const double> x,
                std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) acc += k[i] * (x[i] - y[i]);
    return acc;
}

double checked_gain(const plant::PlantDynamics& model, std::span<const double> xi,
                    std::span<const double> eta) {
    const double b_val = model.b(xi, eta);
    if (std::abs(b_val) < model.b_floor)
        throw plant::GainFloorViolated("controller input gain fell below the floor b_m");
    return b_val;
}

// The trivial twist-angle observer replaces the unmeasured eta_1.
constexpr std::size_t kMaxEta = 32;

std::span<const double> observed_eta(const ControllerSetup& setup, const ControllerState& state,
                                     std::span<const double> eta,
                                     std::array<double, kMaxEta>& scratch) {
    if (!setup.use_observer || !state.observer.has_value()) return eta;
    if (eta.size() < 2 || eta.size() > kMaxEta)
        throw std::invalid_argument("trivial observer needs 2 <= n_eta <= 32");
    for (std::size_t i = 0; i < eta.size(); ++i) scratch[i] = eta[i];
    scratch[0] = *state.observer;
    return {scratch.data(), eta.size()};
}

void integrator_chain_rhs(std::span<const double> xi_star, double forcing,
                          std::vector<double>& out) {
    const std::size_t n = xi_star.size();
    out.resize(n);
    for (std::size_t i = 0; i + 1 < n; ++i) out[i] = xi_star[i + 1];
    out[n - 1] = forcing;
}

}  // namespace

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::MfcEfficient: return "mfc_efficient";
        case Mode::MfcClassical: return "mfc_classical";
        case Mode::SingleLoop: return "single_loop";
        case Mode::PiMfc: return "pi_mfc";
        case Mode::PiSingleLoop: return "pi_single_loop";
    }
    return "unknown";
}

std::optional<Mode> mode_from_string(const std::string& name) {
    if (name == "mfc_efficient") return Mode::MfcEfficient;
    if (name == "mfc_classical") return Mode::MfcClassical;
    if (name == "single_loop") return Mode::SingleLoop;
    if (name == "pi_mfc") return Mode::PiMfc;
    if (name == "pi_single_loop") return Mode::PiSingleLoop;
    return std::nullopt;
}

bool mode_has_mcl(Mode mode) {
    return mode == Mode::MfcEfficient || mode == Mode::MfcClassical || mode == Mode::PiMfc;
}

bool mode_has_pi(Mode mode) { return mode == Mode::PiMfc || mode == Mode::PiSingleLoop; }

std::pair<double, double> pi_auxiliary(const PiGains& g, double e1, double e2, double integral) {
    const double w = g.kp * (-e1) + g.ki * integral;
    const double v = -g.a0 * e1 - g.a1 * e2 + g.b0 * w;
    return {v, -e1};
}

ctrlmath::RationalTransfer pi_open_loop(const PiGains& g) {
    return ctrlmath::RationalTransfer({g.b0 * g.ki, g.b0 * g.kp}, {0.0, g.a0, g.a1, 1.0});
}

ControlOutput mfc_control(const ControllerSetup& setup, const ControllerState& state,
                          const plant::FullState& meas, const reference::DesiredState& ref) {
    const plant::PlantDynamics& model = setup.nominal;
    if (state.xi_star.size() != model.n_xi)
        throw std::invalid_argument("MCL state dimension mismatch");

    std::array<double, kMaxEta> scratch;
    const auto eta_meas = observed_eta(setup, state, meas.eta, scratch);

    ControlOutput out;
    out.v_star = -dot_diff(setup.design.k, state.xi_star, ref.xi_d);
    out.v_tilde = -dot_diff(setup.design.k_scaled, meas.xi, state.xi_star);

    if (setup.mode == Mode::MfcEfficient) {
        const double a_val = model.a(meas.xi, eta_meas);
        const double b_val = checked_gain(model, meas.xi, eta_meas);
        out.u = (-a_val + ref.top_derivative + out.v_star + out.v_tilde) / b_val;
        integrator_chain_rhs(state.xi_star, ref.top_derivative + out.v_star, out.mcl_xi_dot);
    } else {
        if (state.eta_star.size() != model.n_eta)
            throw std::invalid_argument("classical MCL internal state dimension mismatch");
        // MCL on the nonlinear nominal model.
        const double a_star = model.a(state.xi_star, state.eta_star);
        const double b_star = checked_gain(model, state.xi_star, state.eta_star);
        const double u_star = (-a_star + ref.top_derivative + out.v_star) / b_star;
        // PCL with the auxiliary nonlinearity
        // a_tilde = a(xi,eta) - a(xi*,eta*) + (b(xi,eta) - b(xi*,eta*)) u*.
        const double a_val = model.a(meas.xi, eta_meas);
        const double b_val = checked_gain(model, meas.xi, eta_meas);
        const double a_tilde = a_val - a_star + (b_val - b_star) * u_star;
        const double u_tilde = (-a_tilde + out.v_tilde) / b_val;
        out.u_star = u_star;
        out.u_tilde = u_tilde;
        out.u = u_star + u_tilde;
        integrator_chain_rhs(state.xi_star, a_star + b_star * u_star, out.mcl_xi_dot);
        if (model.n_eta > 0) {
            out.mcl_eta_dot.resize(model.n_eta);
            model.q(state.xi_star, state.eta_star, out.mcl_eta_dot);
        }
    }

    if (setup.use_observer && state.observer.has_value())
        out.observer_rate = meas.xi[0] - meas.eta[1];
    return out;
}

ControlOutput single_loop_control(const ControllerSetup& setup, const ControllerState& state,
                                  const plant::FullState& meas,
                                  const reference::DesiredState& ref) {
    const plant::PlantDynamics& model = setup.nominal;
    std::array<double, kMaxEta> scratch;
    const auto eta_meas = observed_eta(setup, state, meas.eta, scratch);

    ControlOutput out;
    out.v_tilde = -dot_diff(setup.design.k_scaled, meas.xi, ref.xi_d);
    const double a_val = model.a(meas.xi, eta_meas);
    const double b_val = checked_gain(model, meas.xi, eta_meas);
    out.u = (-a_val + ref.top_derivative + out.v_tilde) / b_val;

    if (setup.use_observer && state.observer.has_value())
        out.observer_rate = meas.xi[0] - meas.eta[1];
    return out;
}

ControlOutput pi_control(const ControllerSetup& setup, const ControllerState& state,
                         const plant::FullState& meas, const reference::DesiredState& ref) {
    if (!setup.pi.has_value()) throw std::invalid_argument("PI mode needs PI gains");
    const PiGains& g = *setup.pi;
    const plant::PlantDynamics& model = setup.nominal;
    if (model.n_xi != 2) throw std::invalid_argument("PI control laws are defined for n_xi = 2");
    std::array<double, kMaxEta> scratch;
    const auto eta_meas = observed_eta(setup, state, meas.eta, scratch);

    ControlOutput out;
    double e1 = 0.0, e2 = 0.0;
    if (setup.mode == Mode::PiMfc) {
        if (state.xi_star.size() != model.n_xi)
            throw std::invalid_argument("MCL state dimension mismatch");
        out.v_star = -dot_diff(setup.design.k, state.xi_star, ref.xi_d);
        e1 = meas.xi[0] - state.xi_star[0];
        e2 = meas.xi[1] - state.xi_star[1];
        integrator_chain_rhs(state.xi_star, ref.top_derivative + out.v_star, out.mcl_xi_dot);
    } else {
        e1 = meas.xi[0] - ref.xi_d[0];
        e2 = meas.xi[1] - ref.xi_d[1];
    }
    const auto [v, integral_rate] = pi_auxiliary(g, e1, e2, state.pi_integral);
    out.v_tilde = v;
    out.pi_integral_rate = integral_rate;

    const double a_val = model.a(meas.xi, eta_meas);
    const double b_val = checked_gain(model, meas.xi, eta_meas);
    out.u = (-a_val + ref.top_derivative + out.v_star + out.v_tilde) / b_val;

    if (setup.use_observer && state.observer.has_value())
        out.observer_rate = meas.xi[0] - meas.eta[1];
    return out;
}

ControlOutput evaluate_control(const ControllerSetup& setup, const ControllerState& state,
                               const plant::FullState& meas, const reference::DesiredState& ref) {
    switch (setup.mode) {
        case Mode::MfcEfficient:
        case Mode::MfcClassical:
            return mfc_control(setup, state, meas, ref);
        case Mode::SingleLoop:
            return single_loop_control(setup, state, meas, ref);
        case Mode::PiMfc:
        case Mode::PiSingleLoop:
            return pi_control(setup, state, meas, ref);
    }
    throw std::logic_error("unknown controller mode");
}

std::size_t controller_cost(Mode mode, std::size_t n_xi, std::size_t n_eta) {
    switch (mode) {
        case Mode::MfcEfficient: return n_xi;
        case Mode::MfcClassical: return n_xi + n_eta;
        case Mode::SingleLoop: return 0;
        case Mode::PiMfc: return n_xi + 1;
        case Mode::PiSingleLoop: return 1;
    }
    return 0;
}

}  // namespace mfc::controllers
