#include "mfc/scenario/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mfc/controllers/gain_design.hpp"

namespace mfc::scenario {
namespace {

void check_known_keys(const TomlTable& t) {
    static const std::set<std::string> known = {
        "name",
        "plant.kind", "plant.preset", "plant.toy", "plant.delta0", "plant.lipschitz",
        "plant.freq",
        "vehicle.tau_m", "vehicle.i_G", "vehicle.J_c", "vehicle.c_F", "vehicle.k_c",
        "vehicle.d_c", "vehicle.J_r", "vehicle.C_r", "vehicle.B_r", "vehicle.m", "vehicle.g",
        "vehicle.l_f", "vehicle.l_r", "vehicle.rho_a", "vehicle.r_r", "vehicle.c_w",
        "vehicle.A_st", "vehicle.mu", "vehicle.kappa",
        "vehicle.estimates.mu_hat", "vehicle.estimates.B_hat", "vehicle.estimates.C_hat",
        "controller.mode", "controller.k", "controller.epsilon", "controller.epsilon_auto",
        "controller.model_init", "controller.xi_star0", "controller.use_observer",
        "controller.observer0",
        "controller.pi.a0", "controller.pi.a1", "controller.pi.b0", "controller.pi.kp",
        "controller.pi.ki",
        "reference.initial", "reference.unit", "reference.transitions",
        "initial.vx_kmh", "initial.xi0", "initial.eta0",
        "design.r_inf", "design.rd_margin", "design.delta0", "design.lipschitz",
        "sim.step", "sim.horizon", "sim.stride", "sim.guard", "sim.tail_fraction",
        "schedule.mu", "schedule.mu_hat",
        "grid.half_width", "grid.points_per_axis", "grid.eps_list",
        "output.csv",
    };
    for (const auto& [key, value] : t.entries()) {
        if (!known.count(key))
            throw ConfigError("unknown field '" + key + "'", t.line_of(key));
    }
}

std::vector<std::pair<double, double>> parse_steps(const TomlTable& t, const std::string& key) {
    std::vector<std::pair<double, double>> out;
    const TomlValue* v = t.find(key);
    if (v == nullptr) return out;
    for (const auto& item : v->as_array()) {
        const auto pair = item.as_number_array();
        if (pair.size() != 2)
            throw ConfigError("field '" + key + "' needs [time_s, value] pairs", t.line_of(key));
        out.emplace_back(pair[0], pair[1]);
    }
    return out;
}

}  // namespace

ScenarioConfig parse_config(const std::string& toml_text) {
    const TomlTable t = TomlTable::parse(toml_text);
    check_known_keys(t);

    ScenarioConfig c;
    c.name = t.string_or("name", "scenario");

    c.plant_kind = t.string_or("plant.kind", "vehicle");
    if (c.plant_kind != "vehicle" && c.plant_kind != "toy")
        throw ConfigError("plant.kind must be \"vehicle\" or \"toy\"", t.line_of("plant.kind"));
    if (c.plant_kind == "vehicle") {
        c.vehicle_preset = t.string_or("plant.preset", "paper-rwd");
        if (c.vehicle_preset != "paper-rwd")
            throw ConfigError("unknown vehicle preset '" + c.vehicle_preset + "'",
                              t.line_of("plant.preset"));
        c.vehicle_params = vehicle::VehicleParams::paper_rwd();
        auto maybe = [&](const char* key, double& field) {
            field = t.number_or(std::string("vehicle.") + key, field);
        };
        maybe("tau_m", c.vehicle_params.tau_m);
        maybe("i_G", c.vehicle_params.i_G);
        maybe("J_c", c.vehicle_params.J_c);
        maybe("c_F", c.vehicle_params.c_F);
        maybe("k_c", c.vehicle_params.k_c);
        maybe("d_c", c.vehicle_params.d_c);
        maybe("J_r", c.vehicle_params.J_r);
        maybe("C_r", c.vehicle_params.C_r);
        maybe("B_r", c.vehicle_params.B_r);
        maybe("m", c.vehicle_params.m);
        maybe("g", c.vehicle_params.g);
        maybe("l_f", c.vehicle_params.l_f);
        maybe("l_r", c.vehicle_params.l_r);
        maybe("rho_a", c.vehicle_params.rho_a);
        maybe("r_r", c.vehicle_params.r_r);
        maybe("c_w", c.vehicle_params.c_w);
        maybe("A_st", c.vehicle_params.A_st);
        maybe("mu", c.vehicle_params.mu);
        maybe("kappa", c.vehicle_params.kappa);
        c.estimates.mu_hat = t.number_or("vehicle.estimates.mu_hat", c.estimates.mu_hat);
        c.estimates.B_hat = t.number_or("vehicle.estimates.B_hat", c.estimates.B_hat);
        c.estimates.C_hat = t.number_or("vehicle.estimates.C_hat", c.estimates.C_hat);
        try {
            c.vehicle_params.validate();
            c.estimates.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("vehicle parameters: ") + e.what());
        }
    } else {
        c.toy_kind = t.string_or("plant.toy", "double-integrator");
        if (c.toy_kind != "double-integrator" && c.toy_kind != "perturbed-double-integrator" &&
            c.toy_kind != "nonlinear-internal")
            throw ConfigError("unknown toy plant '" + c.toy_kind + "'", t.line_of("plant.toy"));
        c.toy_delta0 = t.number_or("plant.delta0", 0.0);
        c.toy_lipschitz = t.number_or("plant.lipschitz", 0.0);
        c.toy_freq = t.number_or("plant.freq", 1.0);
    }

    const std::string mode_name = t.string_or("controller.mode", "mfc_efficient");
    const auto mode = controllers::mode_from_string(mode_name);
    if (!mode)
        throw ConfigError("unknown controller mode '" + mode_name + "'",
                          t.line_of("controller.mode"));
    c.mode = *mode;
    if (t.contains("controller.k")) c.k = t.number_array("controller.k");
    if (c.k.empty()) throw ConfigError("controller.k must be nonempty", t.line_of("controller.k"));

    c.epsilon_auto = t.boolean_or("controller.epsilon_auto", false);
    c.epsilon = t.number_or("controller.epsilon", c.epsilon);
    if (!c.epsilon_auto && !(c.epsilon > 0.0 && c.epsilon < 1.0))
        throw ConfigError("controller.epsilon must lie in the open interval (0, 1)",
                          t.line_of("controller.epsilon"));

    if (t.contains("controller.pi.kp") || t.contains("controller.pi.ki")) {
        controllers::PiGains g;
        g.a0 = t.number_or("controller.pi.a0", 0.0);
        g.a1 = t.number_or("controller.pi.a1", 0.0);
        g.b0 = t.number_or("controller.pi.b0", 1.0);
        g.kp = t.number("controller.pi.kp");
        g.ki = t.number("controller.pi.ki");
        c.pi = g;
    }
    if (controllers::mode_has_pi(c.mode) && !c.pi)
        throw ConfigError("PI controller modes need [controller.pi] gains");

    const std::string init_name = t.string_or("controller.model_init", "exact");
    const auto policy = sim::model_init_from_string(init_name);
    if (!policy)
        throw ConfigError("controller.model_init must be exact, consistent or explicit",
                          t.line_of("controller.model_init"));
    c.model_init = *policy;
    if (t.contains("controller.xi_star0")) c.xi_star0 = t.number_array("controller.xi_star0");
    if (c.model_init == sim::ModelInitPolicy::Explicit && c.xi_star0.empty())
        throw ConfigError("explicit model_init needs controller.xi_star0");
    c.use_observer = t.boolean_or("controller.use_observer", c.plant_kind == "vehicle");
    c.observer0 = t.number_or("controller.observer0", 0.0);
    if (c.use_observer && c.plant_kind != "vehicle")
        throw ConfigError("the trivial observer is only defined for the vehicle plant");

    c.reference.initial = t.number_or("reference.initial", 0.0);
    c.reference.unit = t.string_or("reference.unit", c.plant_kind == "vehicle" ? "kmh" : "si");
    if (c.reference.unit != "kmh" && c.reference.unit != "si")
        throw ConfigError("reference.unit must be \"kmh\" or \"si\"", t.line_of("reference.unit"));
    if (const TomlValue* trans = t.find("reference.transitions"); trans != nullptr) {
        for (const auto& item : trans->as_array()) {
            const auto triple = item.as_number_array();
            if (triple.size() != 3)
                throw ConfigError(
                    "reference.transitions needs [start_s, target, duration_s] triples",
                    t.line_of("reference.transitions"));
            c.reference.transitions.push_back({triple[0], triple[1], triple[2]});
        }
    }

    c.vx0_kmh = t.number_or("initial.vx_kmh", 70.0);
    if (t.contains("initial.xi0")) c.xi0 = t.number_array("initial.xi0");
    if (t.contains("initial.eta0")) c.eta0 = t.number_array("initial.eta0");

    if (t.contains("design.delta0") || t.contains("design.lipschitz")) {
        plant::PerturbationBound b;
        b.delta0 = t.number_or("design.delta0", 0.0);
        b.lipschitz = t.number_or("design.lipschitz", 0.0);
        if (b.delta0 < 0.0 || b.lipschitz < 0.0)
            throw ConfigError("perturbation bound scalars must be nonnegative");
        c.bound = b;
    }
    c.r_inf = t.number_or("design.r_inf", 0.1);
    if (!(c.r_inf > 0.0)) throw ConfigError("design.r_inf must be positive");
    c.rd_margin = t.number_or("design.rd_margin", 0.05);
    if (!(c.rd_margin > 0.0)) throw ConfigError("design.rd_margin must be positive");

    c.sim.step_h = t.number_or("sim.step", 1e-3);
    c.sim.horizon_T = t.number_or("sim.horizon", 30.0);
    c.sim.sample_stride = static_cast<std::size_t>(t.number_or("sim.stride", 1));
    c.sim.state_guard = t.number_or("sim.guard", 1e7);
    c.sim.tail_fraction = t.number_or("sim.tail_fraction", 0.25);
    try {
        c.sim.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("sim settings: ") + e.what());
    }

    c.mu_steps = parse_steps(t, "schedule.mu");
    c.mu_hat_steps = parse_steps(t, "schedule.mu_hat");
    if ((!c.mu_steps.empty() || !c.mu_hat_steps.empty()) && c.plant_kind != "vehicle")
        throw ConfigError("friction schedules apply to the vehicle plant only");

    if (t.contains("grid.half_width")) c.grid_half_width = t.number_array("grid.half_width");
    c.grid_points_per_axis = static_cast<std::size_t>(t.number_or("grid.points_per_axis", 5));
    if (t.contains("grid.eps_list")) c.eps_list = t.number_array("grid.eps_list");
    for (double e : c.eps_list)
        if (!(e > 0.0 && e < 1.0))
            throw ConfigError("grid.eps_list entries must lie in (0, 1)",
                              t.line_of("grid.eps_list"));

    c.csv_path = t.string_or("output.csv", "");
    return c;
}

std::string dump_config(const ScenarioConfig& c) {
    TomlTable t;
    t.set("name", TomlValue::string(c.name));
    t.set("plant.kind", TomlValue::string(c.plant_kind));
    if (c.plant_kind == "vehicle") {
        t.set("plant.preset", TomlValue::string(c.vehicle_preset));
        const vehicle::VehicleParams def = vehicle::VehicleParams::paper_rwd();
        auto maybe = [&](const char* key, double value, double fallback) {
            if (value != fallback) t.set(std::string("vehicle.") + key, TomlValue::number(value));
        };
        maybe("tau_m", c.vehicle_params.tau_m, def.tau_m);
        maybe("i_G", c.vehicle_params.i_G, def.i_G);
        maybe("J_c", c.vehicle_params.J_c, def.J_c);
        maybe("c_F", c.vehicle_params.c_F, def.c_F);
        maybe("k_c", c.vehicle_params.k_c, def.k_c);
        maybe("d_c", c.vehicle_params.d_c, def.d_c);
        maybe("J_r", c.vehicle_params.J_r, def.J_r);
        maybe("C_r", c.vehicle_params.C_r, def.C_r);
        maybe("B_r", c.vehicle_params.B_r, def.B_r);
        maybe("m", c.vehicle_params.m, def.m);
        maybe("g", c.vehicle_params.g, def.g);
        maybe("l_f", c.vehicle_params.l_f, def.l_f);
        maybe("l_r", c.vehicle_params.l_r, def.l_r);
        maybe("rho_a", c.vehicle_params.rho_a, def.rho_a);
        maybe("r_r", c.vehicle_params.r_r, def.r_r);
        maybe("c_w", c.vehicle_params.c_w, def.c_w);
        maybe("A_st", c.vehicle_params.A_st, def.A_st);
        maybe("mu", c.vehicle_params.mu, def.mu);
        maybe("kappa", c.vehicle_params.kappa, def.kappa);
        t.set("vehicle.estimates.mu_hat", TomlValue::number(c.estimates.mu_hat));
        t.set("vehicle.estimates.B_hat", TomlValue::number(c.estimates.B_hat));
        t.set("vehicle.estimates.C_hat", TomlValue::number(c.estimates.C_hat));
        t.set("initial.vx_kmh", TomlValue::number(c.vx0_kmh));
    } else {
        t.set("plant.toy", TomlValue::string(c.toy_kind));
        if (c.toy_kind == "perturbed-double-integrator") {
            t.set("plant.delta0", TomlValue::number(c.toy_delta0));
            t.set("plant.lipschitz", TomlValue::number(c.toy_lipschitz));
            t.set("plant.freq", TomlValue::number(c.toy_freq));
        }
    }

    t.set("controller.mode", TomlValue::string(controllers::to_string(c.mode)));
    std::vector<TomlValue> kv;
    for (double v : c.k) kv.push_back(TomlValue::number(v));
    t.set("controller.k", TomlValue::array(std::move(kv)));
    t.set("controller.epsilon", TomlValue::number(c.epsilon));
    if (c.epsilon_auto) t.set("controller.epsilon_auto", TomlValue::boolean(true));
    t.set("controller.model_init", TomlValue::string(sim::to_string(c.model_init)));
    if (!c.xi_star0.empty()) {
        std::vector<TomlValue> xs;
        for (double v : c.xi_star0) xs.push_back(TomlValue::number(v));
        t.set("controller.xi_star0", TomlValue::array(std::move(xs)));
    }
    t.set("controller.use_observer", TomlValue::boolean(c.use_observer));
    if (c.observer0 != 0.0) t.set("controller.observer0", TomlValue::number(c.observer0));
    if (c.pi) {
        t.set("controller.pi.a0", TomlValue::number(c.pi->a0));
        t.set("controller.pi.a1", TomlValue::number(c.pi->a1));
        t.set("controller.pi.b0", TomlValue::number(c.pi->b0));
        t.set("controller.pi.kp", TomlValue::number(c.pi->kp));
        t.set("controller.pi.ki", TomlValue::number(c.pi->ki));
    }

    t.set("reference.initial", TomlValue::number(c.reference.initial));
    t.set("reference.unit", TomlValue::string(c.reference.unit));
    if (!c.reference.transitions.empty()) {
        std::vector<TomlValue> trans;
        for (const auto& tr : c.reference.transitions)
            trans.push_back(TomlValue::array({TomlValue::number(tr.start_s),
                                              TomlValue::number(tr.target),
                                              TomlValue::number(tr.duration_s)}));
        t.set("reference.transitions", TomlValue::array(std::move(trans)));
    }

    if (!c.xi0.empty()) {
        std::vector<TomlValue> v;
        for (double x : c.xi0) v.push_back(TomlValue::number(x));
        t.set("initial.xi0", TomlValue::array(std::move(v)));
    }
    if (!c.eta0.empty()) {
        std::vector<TomlValue> v;
        for (double x : c.eta0) v.push_back(TomlValue::number(x));
        t.set("initial.eta0", TomlValue::array(std::move(v)));
    }

    if (c.bound) {
        t.set("design.delta0", TomlValue::number(c.bound->delta0));
        t.set("design.lipschitz", TomlValue::number(c.bound->lipschitz));
    }
    t.set("design.r_inf", TomlValue::number(c.r_inf));
    t.set("design.rd_margin", TomlValue::number(c.rd_margin));

    t.set("sim.step", TomlValue::number(c.sim.step_h));
    t.set("sim.horizon", TomlValue::number(c.sim.horizon_T));
    t.set("sim.stride", TomlValue::number(double(c.sim.sample_stride)));
    t.set("sim.guard", TomlValue::number(c.sim.state_guard));
    t.set("sim.tail_fraction", TomlValue::number(c.sim.tail_fraction));

    auto set_steps = [&](const char* key, const std::vector<std::pair<double, double>>& steps) {
        if (steps.empty()) return;
        std::vector<TomlValue> arr;
        for (const auto& [time, value] : steps)
            arr.push_back(TomlValue::array({TomlValue::number(time), TomlValue::number(value)}));
        t.set(key, TomlValue::array(std::move(arr)));
    };
    set_steps("schedule.mu", c.mu_steps);
    set_steps("schedule.mu_hat", c.mu_hat_steps);

    if (!c.grid_half_width.empty()) {
        std::vector<TomlValue> hw;
        for (double v : c.grid_half_width) hw.push_back(TomlValue::number(v));
        t.set("grid.half_width", TomlValue::array(std::move(hw)));
        t.set("grid.points_per_axis", TomlValue::number(double(c.grid_points_per_axis)));
    }
    if (!c.eps_list.empty()) {
        std::vector<TomlValue> el;
        for (double v : c.eps_list) el.push_back(TomlValue::number(v));
        t.set("grid.eps_list", TomlValue::array(std::move(el)));
    }

    if (!c.csv_path.empty()) t.set("output.csv", TomlValue::string(c.csv_path));
    return t.dump();
}

std::uint64_t config_hash(const ScenarioConfig& config) {
    const std::string text = dump_config(config);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

ScenarioBundle assemble(const ScenarioConfig& c) {
    ScenarioBundle bundle;

    // Reference signal in controller units and its strict bound r_d.
    const bool is_vehicle = c.plant_kind == "vehicle";
    const double unit_scale = c.reference.unit == "kmh" ? 1.0 / 3.6 : 1.0;
    std::vector<reference::Transition> si_transitions;
    for (const auto& tr : c.reference.transitions)
        si_transitions.push_back({tr.start_s, tr.target * unit_scale, tr.duration_s});

    if (is_vehicle) {
        vehicle::StepSchedule mu{c.vehicle_params.mu, c.mu_steps};
        vehicle::StepSchedule mu_hat{c.estimates.mu_hat, c.mu_hat_steps};
        bundle.vehicle_system = vehicle::build_case_study_plant(c.vehicle_params, c.estimates,
                                                                std::move(mu), std::move(mu_hat));
        const auto& system = *bundle.vehicle_system;
        bundle.truth = system.truth_plant();
        bundle.controller.nominal = system.nominal_model();
        bundle.schedule = system.schedule();
        bundle.init = system.initial_condition(vehicle::kmh_to_mps(c.vx0_kmh));
        bundle.init.model_init = c.model_init;
        bundle.init.xi_star0 = c.xi_star0;
        bundle.init.observer0 = c.observer0;

        // Vehicle-speed signal sampled in m/s, then mapped to wheel speed.
        const double r_r = c.vehicle_params.r_r;
        auto signal = reference::ReferenceSignal::from_transitions(
            c.reference.initial * unit_scale, si_transitions, 2);
        bundle.ref = [signal, r_r](double t) {
            const auto v = signal.sample(t);
            return reference::wheel_reference({v.xi_d[0], v.xi_d[1], v.top_derivative}, r_r);
        };
        // Same signal in wheel units for the bound.
        std::vector<reference::Transition> wheel_transitions = si_transitions;
        for (auto& tr : wheel_transitions) tr.target /= r_r;
        const auto wheel_signal = reference::ReferenceSignal::from_transitions(
            c.reference.initial * unit_scale / r_r, wheel_transitions, 2);
        bundle.r_d = reference::reference_bound(wheel_signal, c.sim.horizon_T, c.rd_margin);
    } else {
        if (c.toy_kind == "double-integrator") {
            bundle.truth = plant::double_integrator();
        } else if (c.toy_kind == "perturbed-double-integrator") {
            bundle.truth =
                plant::perturbed_double_integrator(c.toy_delta0, c.toy_lipschitz, c.toy_freq);
        } else {
            bundle.truth = plant::toy_nonlinear_internal();
        }
        // The toy nominal model is the unperturbed plant.
        bundle.controller.nominal = bundle.truth;
        bundle.controller.nominal.delta = nullptr;

        auto signal = reference::ReferenceSignal::from_transitions(
            c.reference.initial * unit_scale, si_transitions, bundle.truth.n_xi);
        bundle.ref = [signal](double t) { return signal.sample(t); };
        bundle.r_d = reference::reference_bound(signal, c.sim.horizon_T, c.rd_margin);

        bundle.init.xi0 = c.xi0.empty() ? std::vector<double>(bundle.truth.n_xi, 0.0) : c.xi0;
        bundle.init.eta0 = c.eta0.empty() ? std::vector<double>(bundle.truth.n_eta, 0.0) : c.eta0;
        bundle.init.model_init = c.model_init;
        bundle.init.xi_star0 = c.xi_star0;
        if (bundle.init.xi0.size() != bundle.truth.n_xi ||
            bundle.init.eta0.size() != bundle.truth.n_eta)
            throw ConfigError("initial state dimensions do not match the toy plant");
    }

    // Perturbation bound: given, or fitted for the vehicle, or the toy's
    // construction values.
    if (c.bound) {
        bundle.bound = *c.bound;
    } else if (is_vehicle) {
        const double v_lo = std::min(c.vx0_kmh, 60.0);
        double v_hi = std::max(c.vx0_kmh, c.reference.unit == "kmh" ? c.reference.initial : 120.0);
        for (const auto& tr : c.reference.transitions)
            v_hi = std::max(v_hi, c.reference.unit == "kmh" ? tr.target : tr.target * 3.6);
        bundle.bound = vehicle::fit_perturbation_bound(*bundle.vehicle_system, v_lo, v_hi + 10.0,
                                                       10.0, 0.05, c.observer0);
        bundle.bound_fitted = true;
    } else {
        bundle.bound = {c.toy_delta0, c.toy_lipschitz};
    }

    // Gain design, optionally choosing epsilon from the precision bound.
    bundle.controller.mode = c.mode;
    bundle.controller.use_observer = c.use_observer;
    bundle.controller.pi = c.pi;
    controllers::GainDesign design = controllers::make_gain_design(c.k, 1.0);
    double epsilon = c.epsilon;
    if (c.epsilon_auto) {
        const auto bounds = controllers::epsilon_bounds(design, bundle.bound, bundle.r_d, c.r_inf);
        epsilon = 0.99 * bounds.precision;
    }
    bundle.epsilon_used = epsilon;
    bundle.controller.design = design.with_epsilon(epsilon);
    return bundle;
}

}  // namespace mfc::scenario
