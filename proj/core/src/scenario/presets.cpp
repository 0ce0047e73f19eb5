#include "mfc/scenario/presets.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mfc::scenario {
namespace {

ScenarioConfig vehicle_base() {
    ScenarioConfig c;
    c.plant_kind = "vehicle";
    c.vehicle_params = vehicle::VehicleParams::paper_rwd();
    c.estimates = vehicle::TireEstimates{};
    c.k = {1.0, 2.0};
    c.epsilon = 0.15;
    c.model_init = sim::ModelInitPolicy::Exact;
    c.use_observer = true;
    c.reference.unit = "kmh";
    c.sim.step_h = 1e-3;
    c.sim.horizon_T = 30.0;
    return c;
}

ScenarioConfig accel() {
    ScenarioConfig c = vehicle_base();
    c.name = "accel";
    c.vx0_kmh = 70.0;
    c.reference.initial = 90.0;
    c.reference.transitions = {{0.0, 120.0, 15.0}};
    c.csv_path = "accel.csv";
    return c;
}

ScenarioConfig decel() {
    ScenarioConfig c = vehicle_base();
    c.name = "decel";
    c.vx0_kmh = 130.0;
    c.reference.initial = 120.0;
    c.reference.transitions = {{0.0, 90.0, 15.0}};
    c.csv_path = "decel.csv";
    return c;
}

ScenarioConfig advanced_cruise() {
    ScenarioConfig c = vehicle_base();
    c.name = "advanced-cruise";
    c.vx0_kmh = 70.0;
    c.reference.initial = 90.0;
    // Overtaking-style manoeuvre: accelerate, cruise, decelerate.
    c.reference.transitions = {{0.0, 120.0, 15.0}, {20.0, 90.0, 15.0}};
    c.sim.horizon_T = 40.0;
    c.epsilon = 0.05;
    c.eps_list = {0.25, 0.05};
    // Road friction drops during the acceleration and recovers during the
    // deceleration; the estimate tracks with the same offset.
    c.mu_steps = {{10.0, 0.5}, {25.0, 1.0}};
    c.mu_hat_steps = {{10.0, 0.4}, {25.0, 0.9}};
    c.csv_path = "advanced_cruise.csv";
    return c;
}

ScenarioConfig pi_compare() {
    ScenarioConfig c = accel();
    c.name = "pi-compare";
    c.mode = controllers::Mode::PiMfc;
    controllers::PiGains g;
    g.a0 = 0.0;
    g.a1 = 1.0 / c.vehicle_params.tau_m;
    g.b0 = c.vehicle_params.i_G / (c.vehicle_params.tau_m * c.vehicle_params.J_r);
    g.kp = 0.65;
    g.ki = 0.16;
    c.pi = g;
    c.csv_path = "pi_compare.csv";
    return c;
}

ScenarioConfig theorem1_toy() {
    ScenarioConfig c;
    c.name = "theorem1-toy";
    c.plant_kind = "toy";
    c.toy_kind = "perturbed-double-integrator";
    c.toy_delta0 = 0.5;
    c.toy_lipschitz = 0.1;
    c.toy_freq = 2.0;
    c.k = {1.0, 2.0};
    c.epsilon_auto = true;
    c.r_inf = 0.1;
    c.bound = plant::PerturbationBound{0.5, 0.1};
    c.mode = controllers::Mode::MfcEfficient;
    c.model_init = sim::ModelInitPolicy::Exact;
    c.use_observer = false;
    c.reference.initial = 0.0;
    c.reference.unit = "si";
    c.xi0 = {2.0, -1.0};
    c.sim.step_h = 1e-3;
    c.sim.horizon_T = 60.0;
    c.csv_path = "theorem1_toy.csv";
    return c;
}

ScenarioConfig peaking_grid() {
    ScenarioConfig c = accel();
    c.name = "peaking-grid";
    c.epsilon = 0.05;
    c.model_init = sim::ModelInitPolicy::Exact;
    c.grid_half_width = {2.0, 2.0};
    c.grid_points_per_axis = 5;
    c.eps_list = {0.25, 0.05};
    c.csv_path = "peaking_grid.csv";
    return c;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"accel", "decel", "advanced-cruise", "pi-compare", "theorem1-toy", "peaking-grid"};
}

ScenarioConfig load_preset(const std::string& name) {
    if (const char* dir = std::getenv("MFC_LAB_PRESET_DIR"); dir != nullptr) {
        const std::filesystem::path path = std::filesystem::path(dir) / (name + ".toml");
        if (std::filesystem::exists(path)) {
            std::ifstream in(path);
            std::ostringstream text;
            text << in.rdbuf();
            return parse_config(text.str());
        }
    }
    if (name == "accel") return accel();
    if (name == "decel") return decel();
    if (name == "advanced-cruise") return advanced_cruise();
    if (name == "pi-compare") return pi_compare();
    if (name == "theorem1-toy") return theorem1_toy();
    if (name == "peaking-grid") return peaking_grid();
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace mfc::scenario
