#pragma once

#include "mfc/sim/closed_loop.hpp"

namespace mfc::sim {

// One (epsilon, controller) family entry of the peaking comparison:
// max over the initial-state grid of sup_t |u(t)| for the MFC with exact
// model initialisation versus the single loop with the same scaled gain.
struct PeakingEntry {
    double epsilon = 0.0;
    double mfc_max_sup_u = 0.0;
    double sl_max_sup_u = 0.0;
    double sl_initial_lower_bound = 0.0;  // max over grid of analytic |u_sl(0)|
    bool mfc_below_sl = false;
    bool any_guard_trip = false;
};

struct PeakingExperiment {
    std::vector<std::vector<double>> xi0_grid;
    std::vector<PeakingEntry> entries;
};

// Runs the Theorem-2 comparison over a grid of process initial states.
// Grid points are absolute xi0 values; eta0 and everything else come from
// the base initial condition. A guard trip counts as peak = guard value
// and is flagged. Grid runs execute in parallel; the table is assembled
// by grid index, so the outcome is deterministic.
PeakingExperiment peaking_experiment(const plant::PlantDynamics& truth,
                                     const controllers::ControllerSetup& mfc_setup,
                                     const RefFn& ref, const InitialCondition& base_init,
                                     std::span<const std::vector<double>> xi0_grid,
                                     std::span<const double> eps_list, const SimConfig& config,
                                     const Schedule* schedule = nullptr);

// Regular box grid helper: points_per_axis values per component spanning
// [center - half_width, center + half_width].
std::vector<std::vector<double>> box_grid(std::span<const double> center,
                                          std::span<const double> half_width,
                                          std::size_t points_per_axis);

}  // namespace mfc::sim
