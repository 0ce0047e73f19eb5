#include "mfc/sim/closed_loop.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace mfc::sim {

void SimConfig::validate() const {
    if (!(step_h > 0.0)) throw std::invalid_argument("step_h must be positive");
    if (!(horizon_T >= step_h)) throw std::invalid_argument("horizon_T must be >= step_h");
    if (sample_stride < 1) throw std::invalid_argument("sample_stride must be >= 1");
    if (!(state_guard > 0.0)) throw std::invalid_argument("state_guard must be positive");
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
        throw std::invalid_argument("tail_fraction must lie in (0, 1)");
}

std::string to_string(ModelInitPolicy p) {
    switch (p) {
        case ModelInitPolicy::Exact: return "exact";
        case ModelInitPolicy::Consistent: return "consistent";
        case ModelInitPolicy::Explicit: return "explicit";
    }
    return "unknown";
}

std::optional<ModelInitPolicy> model_init_from_string(const std::string& name) {
    if (name == "exact") return ModelInitPolicy::Exact;
    if (name == "consistent") return ModelInitPolicy::Consistent;
    if (name == "explicit") return ModelInitPolicy::Explicit;
    return std::nullopt;
}

std::vector<double> rk4_step(const DerivFn& f, double t, std::span<const double> x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("rk4_step needs h > 0");
    const std::size_t n = x.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), stage(n), out(n);

    auto check = [n](std::span<const double> k, int which) {
        for (std::size_t i = 0; i < n; ++i)
            if (!std::isfinite(k[i]))
                throw NonFiniteDerivative("non-finite derivative at RK4 stage " +
                                          std::to_string(which));
    };

    f(t, x, k1);
    check(k1, 1);
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * h * k1[i];
    f(t + 0.5 * h, stage, k2);
    check(k2, 2);
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * h * k2[i];
    f(t + 0.5 * h, stage, k3);
    check(k3, 3);
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + h * k3[i];
    f(t + h, stage, k4);
    check(k4, 4);

    for (std::size_t i = 0; i < n; ++i)
        out[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

namespace {

struct StateLayout {
    std::size_t n_xi = 0, n_eta = 0;
    std::size_t xi_star_off = 0, n_xi_star = 0;
    std::size_t eta_star_off = 0, n_eta_star = 0;
    std::size_t pi_off = 0;
    bool has_pi = false;
    std::size_t obs_off = 0;
    bool has_obs = false;
    std::size_t total = 0;
};

StateLayout make_layout(const plant::PlantDynamics& truth,
                        const controllers::ControllerSetup& controller) {
    StateLayout l;
    l.n_xi = truth.n_xi;
    l.n_eta = truth.n_eta;
    std::size_t off = l.n_xi + l.n_eta;
    if (controllers::mode_has_mcl(controller.mode)) {
        l.xi_star_off = off;
        l.n_xi_star = truth.n_xi;
        off += l.n_xi_star;
    }
    if (controller.mode == controllers::Mode::MfcClassical) {
        l.eta_star_off = off;
        l.n_eta_star = truth.n_eta;
        off += l.n_eta_star;
    }
    if (controllers::mode_has_pi(controller.mode)) {
        l.pi_off = off++;
        l.has_pi = true;
    }
    if (controller.use_observer) {
        l.obs_off = off++;
        l.has_obs = true;
    }
    l.total = off;
    return l;
}

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

SimResult run_closed_loop(const plant::PlantDynamics& truth,
                          const controllers::ControllerSetup& controller, const RefFn& ref,
                          const InitialCondition& init, const SimConfig& config,
                          const Schedule* schedule) {
    config.validate();
    if (init.xi0.size() != truth.n_xi || init.eta0.size() != truth.n_eta)
        throw std::invalid_argument("initial state dimensions do not match the plant");
    if (controller.nominal.n_xi != truth.n_xi || controller.nominal.n_eta != truth.n_eta)
        throw std::invalid_argument("nominal model dimensions do not match the plant");

    const StateLayout layout = make_layout(truth, controller);
    const double h = config.step_h;
    const std::size_t steps = std::max<std::size_t>(1, std::llround(config.horizon_T / h));

    // Online contract: the provider may not be queried past t + h.
    double watermark = 0.0;
    auto gated_ref = [&](double t) {
        if (t > watermark + h + 1e-9 * std::max(1.0, watermark))
            throw std::logic_error("reference lookahead beyond the online window");
        return ref(t);
    };

    // Assemble the augmented initial state.
    std::vector<double> z(layout.total, 0.0);
    std::copy(init.xi0.begin(), init.xi0.end(), z.begin());
    std::copy(init.eta0.begin(), init.eta0.end(), z.begin() + layout.n_xi);
    if (layout.n_xi_star > 0) {
        std::vector<double> xi_star0;
        switch (init.model_init) {
            case ModelInitPolicy::Exact: xi_star0 = init.xi0; break;
            case ModelInitPolicy::Consistent: xi_star0 = gated_ref(0.0).xi_d; break;
            case ModelInitPolicy::Explicit: xi_star0 = init.xi_star0; break;
        }
        if (xi_star0.size() != layout.n_xi_star)
            throw std::invalid_argument("model initial state dimension mismatch");
        std::copy(xi_star0.begin(), xi_star0.end(), z.begin() + layout.xi_star_off);
    }
    if (layout.n_eta_star > 0) {
        const std::vector<double>& eta_star0 =
            init.eta_star0.empty() ? init.eta0 : init.eta_star0;
        if (eta_star0.size() != layout.n_eta_star)
            throw std::invalid_argument("model internal initial state dimension mismatch");
        std::copy(eta_star0.begin(), eta_star0.end(), z.begin() + layout.eta_star_off);
    }
    if (layout.has_obs) z[layout.obs_off] = init.observer0;

    // Scheduled epochs applied at the nearest grid step.
    struct AppliedEpoch {
        std::size_t step;
        const Epoch* epoch;
    };
    std::vector<AppliedEpoch> pending;
    if (schedule != nullptr) {
        for (const Epoch& e : schedule->epochs) {
            if (e.t_start <= 0.0) throw std::invalid_argument("epoch start must be positive");
            pending.push_back({static_cast<std::size_t>(std::llround(e.t_start / h)), &e});
        }
        std::sort(pending.begin(), pending.end(),
                  [](const AppliedEpoch& a, const AppliedEpoch& b) { return a.step < b.step; });
    }
    const plant::PlantDynamics* active_truth = &truth;
    controllers::ControllerSetup active_controller = controller;
    std::size_t next_epoch = 0;

    // Scratch controller state reused across derivative evaluations.
    controllers::ControllerState cs;
    cs.mode = controller.mode;
    cs.xi_star.resize(layout.n_xi_star);
    cs.eta_star.resize(layout.n_eta_star);
    plant::FullState meas;
    meas.xi.resize(layout.n_xi);
    meas.eta.resize(layout.n_eta);

    auto eval_control = [&](double t, std::span<const double> state) {
        std::copy(state.begin(), state.begin() + layout.n_xi, meas.xi.begin());
        std::copy(state.begin() + layout.n_xi, state.begin() + layout.n_xi + layout.n_eta,
                  meas.eta.begin());
        std::copy(state.begin() + layout.xi_star_off,
                  state.begin() + layout.xi_star_off + layout.n_xi_star, cs.xi_star.begin());
        std::copy(state.begin() + layout.eta_star_off,
                  state.begin() + layout.eta_star_off + layout.n_eta_star, cs.eta_star.begin());
        if (layout.has_pi) cs.pi_integral = state[layout.pi_off];
        cs.observer = layout.has_obs ? std::optional<double>(state[layout.obs_off]) : std::nullopt;
        return controllers::evaluate_control(active_controller, cs, meas, gated_ref(t));
    };

    std::size_t rhs_evals = 0;
    auto deriv = [&](double t, std::span<const double> state, std::span<double> dstate) {
        const auto out = eval_control(t, state);
        plant::plant_rhs_into(*active_truth, meas.xi, meas.eta, out.u, t,
                              dstate.subspan(0, layout.n_xi),
                              dstate.subspan(layout.n_xi, layout.n_eta));
        for (std::size_t i = 0; i < layout.n_xi_star; ++i)
            dstate[layout.xi_star_off + i] = out.mcl_xi_dot[i];
        for (std::size_t i = 0; i < layout.n_eta_star; ++i)
            dstate[layout.eta_star_off + i] = out.mcl_eta_dot[i];
        if (layout.has_pi) dstate[layout.pi_off] = out.pi_integral_rate;
        if (layout.has_obs) dstate[layout.obs_off] = out.observer_rate;
        ++rhs_evals;
    };

    SimResult result;
    result.controller_state_count =
        controllers::controller_cost(controller.mode, layout.n_xi, layout.n_eta) +
        (layout.has_obs ? 1 : 0);
    const bool record_mcl = layout.n_xi_star > 0;
    result.xi.resize(layout.n_xi);
    result.eta.resize(layout.n_eta);
    result.xi_star.resize(record_mcl ? layout.n_xi : 0);
    result.ref_xi.resize(layout.n_xi);

    auto record = [&](double t, std::span<const double> state) {
        const auto out = eval_control(t, state);
        result.times.push_back(t);
        for (std::size_t i = 0; i < layout.n_xi; ++i) result.xi[i].push_back(state[i]);
        for (std::size_t i = 0; i < layout.n_eta; ++i)
            result.eta[i].push_back(state[layout.n_xi + i]);
        if (record_mcl)
            for (std::size_t i = 0; i < layout.n_xi; ++i)
                result.xi_star[i].push_back(state[layout.xi_star_off + i]);
        result.u.push_back(out.u);
        result.v_star.push_back(out.v_star);
        result.v_tilde.push_back(out.v_tilde);
        const auto d = gated_ref(t);
        for (std::size_t i = 0; i < layout.n_xi; ++i) result.ref_xi[i].push_back(d.xi_d[i]);
        result.ref_top.push_back(d.top_derivative);
    };

    record(0.0, z);
    for (std::size_t step = 0; step < steps; ++step) {
        const double t = double(step) * h;
        watermark = t;
        while (next_epoch < pending.size() && step >= pending[next_epoch].step) {
            active_truth = &pending[next_epoch].epoch->truth;
            active_controller.nominal = pending[next_epoch].epoch->nominal;
            ++next_epoch;
        }
        try {
            z = rk4_step(deriv, t, z, h);
        } catch (const NonFiniteDerivative& e) {
            result.aborted = true;
            result.abort_reason = e.what();
            result.abort_time = t;
            break;
        } catch (const plant::GainFloorViolated& e) {
            result.aborted = true;
            result.abort_reason = e.what();
            result.abort_time = t;
            break;
        }
        const double t_next = double(step + 1) * h;
        watermark = t_next;
        if (inf_norm(z) > config.state_guard) {
            result.aborted = true;
            result.abort_reason = "state guard exceeded";
            result.abort_time = t_next;
            break;
        }
        if ((step + 1) % config.sample_stride == 0 || step + 1 == steps) record(t_next, z);
    }

    result.rhs_evaluations = rhs_evals;
    return result;
}

Metrics extract_metrics(const SimResult& result, double tail_fraction) {
    if (result.times.empty()) throw std::invalid_argument("metrics need a nonempty result");
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
        throw std::invalid_argument("tail_fraction must lie in (0, 1)");

    Metrics m;
    for (double u : result.u) m.sup_abs_u = std::max(m.sup_abs_u, std::abs(u));

    const double t_end = result.times.back();
    auto window_error = [&](double t0, double t1) {
        double worst = 0.0;
        for (std::size_t s = 0; s < result.times.size(); ++s) {
            if (result.times[s] < t0 || result.times[s] > t1) continue;
            double norm_sq = 0.0;
            for (std::size_t i = 0; i < result.xi.size(); ++i) {
                const double e = result.xi[i][s] - result.ref_xi[i][s];
                norm_sq += e * e;
            }
            worst = std::max(worst, std::sqrt(norm_sq));
        }
        return worst;
    };

    m.tail_window = {t_end * (1.0 - tail_fraction), t_end};
    m.tail_tracking_error = window_error(m.tail_window.first, m.tail_window.second);

    for (std::size_t s = 0; s < result.times.size(); ++s) {
        double norm_sq = 0.0;
        for (const auto& series : result.eta) norm_sq += series[s] * series[s];
        m.eta_sup = std::max(m.eta_sup, std::sqrt(norm_sq));
    }

    const double q3 = window_error(0.50 * t_end, 0.75 * t_end);
    const double q4 = window_error(0.75 * t_end, t_end);
    m.settled = !result.aborted && q4 <= q3 * (1.0 + 1e-12) + 1e-15;
    return m;
}

void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace mfc::sim
