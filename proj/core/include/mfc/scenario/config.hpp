#pragma once

#include <optional>

#include "mfc/scenario/toml.hpp"
#include "mfc/sim/closed_loop.hpp"
#include "mfc/vehicle/case_study.hpp"

namespace mfc::scenario {

// Reference profile as declared in scenario files: an initial level and a
// list of (start_time_s, target, duration_s) smoothstep transitions.
// Vehicle profiles use km/h ("kmh"); toy profiles use plain SI units.
struct ReferenceProfile {
    double initial = 0.0;
    std::string unit = "si";  // "kmh" or "si"
    std::vector<reference::Transition> transitions;
};

// Fully validated scenario description; the unit of work of every command.
struct ScenarioConfig {
    std::string name = "scenario";

    // plant
    std::string plant_kind = "vehicle";  // "vehicle" or "toy"
    std::string vehicle_preset = "paper-rwd";
    vehicle::VehicleParams vehicle_params;
    vehicle::TireEstimates estimates;
    std::string toy_kind = "double-integrator";
    double toy_delta0 = 0.0;
    double toy_lipschitz = 0.0;
    double toy_freq = 1.0;

    // controller
    controllers::Mode mode = controllers::Mode::MfcEfficient;
    std::vector<double> k{1.0, 2.0};
    double epsilon = 0.15;
    bool epsilon_auto = false;  // choose epsilon from the precision bound
    std::optional<controllers::PiGains> pi;
    sim::ModelInitPolicy model_init = sim::ModelInitPolicy::Exact;
    std::vector<double> xi_star0;
    bool use_observer = false;
    double observer0 = 0.0;

    // reference and initial conditions
    ReferenceProfile reference;
    double vx0_kmh = 70.0;          // vehicle initial speed
    std::vector<double> xi0, eta0;  // toy initial state

    // design inputs
    std::optional<plant::PerturbationBound> bound;  // given; fitted when absent
    double r_inf = 0.1;
    double rd_margin = 0.05;

    // simulation
    sim::SimConfig sim;

    // schedules (vehicle only)
    std::vector<std::pair<double, double>> mu_steps;
    std::vector<std::pair<double, double>> mu_hat_steps;

    // peaking grid
    std::vector<double> grid_half_width;
    std::size_t grid_points_per_axis = 5;
    std::vector<double> eps_list;

    // output
    std::string csv_path;

    bool operator==(const ScenarioConfig&) const = default;
};

// Parses and validates a scenario document. Throws ConfigError with a
// line/field diagnostic on malformed input or invalid values.
ScenarioConfig parse_config(const std::string& toml_text);

// Canonical document for the config; parse_config(dump_config(c)) == c.
std::string dump_config(const ScenarioConfig& config);

// FNV-1a hash of the canonical document, reported as provenance.
std::uint64_t config_hash(const ScenarioConfig& config);

// A runnable closed-loop scenario assembled from a config.
struct ScenarioBundle {
    plant::PlantDynamics truth;
    controllers::ControllerSetup controller;
    sim::RefFn ref;
    sim::InitialCondition init;
    sim::Schedule schedule;
    std::optional<vehicle::CaseStudySystem> vehicle_system;
    plant::PerturbationBound bound;
    bool bound_fitted = false;
    double r_d = 0.0;
    double epsilon_used = 0.0;
};

ScenarioBundle assemble(const ScenarioConfig& config);

}  // namespace mfc::scenario
