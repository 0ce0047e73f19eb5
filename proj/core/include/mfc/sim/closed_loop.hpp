#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mfc/controllers/control_laws.hpp"
#include "mfc/plant/plant.hpp"
#include "mfc/reference/reference.hpp"

namespace mfc::sim {

struct NonFiniteDerivative : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using DerivFn = std::function<void(double t, std::span<const double> x, std::span<double> dx)>;

// Classical fixed-step 4th-order Runge-Kutta update; exactly four
// derivative evaluations. Throws NonFiniteDerivative naming the stage
// when a stage derivative is not finite.
std::vector<double> rk4_step(const DerivFn& f, double t, std::span<const double> x, double h);

struct SimConfig {
    double step_h = 1e-3;
    double horizon_T = 10.0;
    std::size_t sample_stride = 1;
    double state_guard = 1e7;       // abort when ||state||_inf exceeds this
    double tail_fraction = 0.25;    // tail window for metric extraction
    void validate() const;
};

// Uniformly sampled closed-loop trajectories. Component-major series:
// xi[i] is the series of the i-th external state.
struct SimResult {
    std::vector<double> times;
    std::vector<std::vector<double>> xi;
    std::vector<std::vector<double>> eta;
    std::vector<std::vector<double>> xi_star;  // empty for modes without an MCL
    std::vector<double> u;
    std::vector<double> v_star;
    std::vector<double> v_tilde;
    std::vector<std::vector<double>> ref_xi;
    std::vector<double> ref_top;
    std::size_t rhs_evaluations = 0;
    std::size_t controller_state_count = 0;  // integrated controller states incl. observer
    bool aborted = false;
    std::string abort_reason;
    double abort_time = 0.0;
};

struct Metrics {
    double sup_abs_u = 0.0;
    double tail_tracking_error = 0.0;
    std::pair<double, double> tail_window{0.0, 0.0};
    double eta_sup = 0.0;
    bool settled = false;
};

// How the MCL state is initialised: from the process state (peaking
// attenuation), from the reference (reproduces the single loop), or given.
enum class ModelInitPolicy { Exact, Consistent, Explicit };

std::string to_string(ModelInitPolicy p);
std::optional<ModelInitPolicy> model_init_from_string(const std::string& name);

struct InitialCondition {
    std::vector<double> xi0;
    std::vector<double> eta0;
    ModelInitPolicy model_init = ModelInitPolicy::Exact;
    std::vector<double> xi_star0;   // used when model_init == Explicit
    std::vector<double> eta_star0;  // classical mode; defaults to eta0
    double observer0 = 0.0;
};

// Reference provider; must be pure in t. run_closed_loop enforces the
// online contract by rejecting queries past the current step plus one h.
using RefFn = std::function<reference::DesiredState(double t)>;

// Piecewise-constant plant/model swap applied at the nearest grid point,
// used for scheduled parameter changes such as road-friction steps.
struct Epoch {
    double t_start;
    plant::PlantDynamics truth;
    plant::PlantDynamics nominal;
};

struct Schedule {
    std::vector<Epoch> epochs;  // strictly increasing t_start, all > 0
};

SimResult run_closed_loop(const plant::PlantDynamics& truth,
                          const controllers::ControllerSetup& controller, const RefFn& ref,
                          const InitialCondition& init, const SimConfig& config,
                          const Schedule* schedule = nullptr);

Metrics extract_metrics(const SimResult& result, double tail_fraction);

// Runs fn(0..n-1) on a small thread pool; each call owns slot i of its
// output, so the merged result is order-independent.
void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mfc::sim
