#include "mfc/scenario/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "mfc/scenario/csv.hpp"
#include "mfc/sim/experiments.hpp"

namespace mfc::scenario {
namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

std::string eps_tag(double eps) {
    std::ostringstream s;
    s << "eps" << std::setprecision(4) << eps;
    return s.str();
}

std::filesystem::path output_path(const CommandOptions& options, const std::string& file) {
    std::filesystem::path dir(options.out_dir);
    if (!dir.empty()) std::filesystem::create_directories(dir);
    return dir / file;
}

RunRecord make_record(const std::string& label, controllers::Mode mode, double eps,
                      const sim::SimResult& result, double tail_fraction) {
    RunRecord rec;
    rec.label = label;
    rec.mode = mode;
    rec.epsilon = eps;
    rec.metrics = sim::extract_metrics(result, tail_fraction);
    rec.aborted = result.aborted;
    rec.abort_reason = result.abort_reason;
    rec.u0 = result.u.empty() ? 0.0 : result.u.front();
    return rec;
}

}  // namespace

ScenarioConfig load_scenario(const std::string& config_path, const CommandOptions& options) {
    ScenarioConfig config = options.preset ? load_preset(*options.preset)
                                           : parse_config(read_file(config_path));
    if (options.step) {
        config.sim.step_h = *options.step;
        config.sim.validate();
    }
    if (options.horizon) {
        config.sim.horizon_T = *options.horizon;
        config.sim.validate();
    }
    return config;
}

int cmd_run(const std::string& config_path, const CommandOptions& options, std::ostream& out,
            std::ostream& err) {
    ScenarioConfig config;
    try {
        config = load_scenario(config_path, options);
        if (options.dump_config) {
            out << dump_config(config);
            return kExitOk;
        }
        const ScenarioBundle bundle = assemble(config);
        const sim::SimResult result =
            sim::run_closed_loop(bundle.truth, bundle.controller, bundle.ref, bundle.init,
                                 config.sim, bundle.schedule.epochs.empty() ? nullptr
                                                                            : &bundle.schedule);

        const std::string csv_name =
            config.csv_path.empty() ? config.name + ".csv" : config.csv_path;
        const auto path = output_path(options, csv_name);
        write_csv_file(path.string(), result, config.mode);

        RunReport report;
        report.scenario_name = config.name;
        report.config_hash = config_hash(config);
        RunRecord rec = make_record(controllers::to_string(config.mode) + " " +
                                        eps_tag(bundle.controller.design.epsilon),
                                    config.mode, bundle.controller.design.epsilon, result,
                                    config.sim.tail_fraction);
        rec.csv_path = path.string();
        report.runs.push_back(rec);
        report.verdicts.push_back(std::string("bounded (no guard trip): ") +
                                  (result.aborted ? "false" : "true"));
        render_report(out, report);
        out << "csv: " << path.string() << "\n";
        if (result.aborted) {
            err << "guard trip at t = " << result.abort_time << " s: " << result.abort_reason
                << "\n";
            return kExitGuard;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int cmd_compare(const std::string& config_path, const std::vector<std::string>& modes,
                std::vector<double> eps_list, const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
    ScenarioConfig config;
    std::vector<controllers::Mode> mode_list;
    try {
        config = load_scenario(config_path, options);
        for (const auto& name : modes) {
            const auto mode = controllers::mode_from_string(name);
            if (!mode) throw ConfigError("unknown controller mode '" + name + "'");
            if (controllers::mode_has_pi(*mode) && !config.pi)
                throw ConfigError("mode '" + name + "' needs [controller.pi] gains");
            mode_list.push_back(*mode);
        }
        if (mode_list.empty()) mode_list.push_back(config.mode);
        if (eps_list.empty())
            eps_list = config.eps_list.empty() ? std::vector<double>{config.epsilon}
                                               : config.eps_list;
        for (double e : eps_list)
            if (!(e > 0.0 && e < 1.0))
                throw ConfigError("epsilon values must lie in the open interval (0, 1)");
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    const ScenarioBundle base = assemble(config);
    struct Job {
        controllers::Mode mode;
        double eps;
        sim::SimResult result;
        std::string error;
    };
    std::vector<Job> jobs;
    for (double eps : eps_list)
        for (const auto mode : mode_list) jobs.push_back({mode, eps, {}, {}});

    sim::parallel_for_index(jobs.size(), [&](std::size_t i) {
        Job& job = jobs[i];
        try {
            controllers::ControllerSetup setup = base.controller;
            setup.mode = job.mode;
            setup.design = base.controller.design.with_epsilon(job.eps);
            sim::InitialCondition init = base.init;
            if (!controllers::mode_has_mcl(job.mode)) init.xi_star0.clear();
            job.result = sim::run_closed_loop(
                base.truth, setup, base.ref, init, config.sim,
                base.schedule.epochs.empty() ? nullptr : &base.schedule);
        } catch (const std::exception& e) {
            job.error = e.what();
        }
    });

    RunReport report;
    report.scenario_name = config.name;
    report.config_hash = config_hash(config);

    auto find_job = [&](controllers::Mode mode, double eps) -> const Job* {
        for (const auto& j : jobs)
            if (j.mode == mode && j.eps == eps && j.error.empty()) return &j;
        return nullptr;
    };

    for (auto& job : jobs) {
        const std::string label = controllers::to_string(job.mode) + " " + eps_tag(job.eps);
        if (!job.error.empty()) {
            report.verdicts.push_back(label + ": run failed: " + job.error);
            continue;
        }
        RunRecord rec = make_record(label, job.mode, job.eps, job.result,
                                    config.sim.tail_fraction);
        const std::string csv_name = config.name + "_" + controllers::to_string(job.mode) + "_" +
                                     eps_tag(job.eps) + ".csv";
        const auto path = output_path(options, csv_name);
        write_csv_file(path.string(), job.result, job.mode);
        rec.csv_path = path.string();
        report.runs.push_back(rec);
    }

    std::ostringstream verdict;
    verdict << std::setprecision(6);
    for (double eps : eps_list) {
        // Peaking comparison when an MFC mode and the single loop are present.
        const Job* mfc = find_job(controllers::Mode::MfcEfficient, eps);
        if (mfc == nullptr) mfc = find_job(controllers::Mode::MfcClassical, eps);
        const Job* sl = find_job(controllers::Mode::SingleLoop, eps);
        if (mfc != nullptr && sl != nullptr) {
            const double mfc_sup =
                sim::extract_metrics(mfc->result, config.sim.tail_fraction).sup_abs_u;
            const double sl_sup =
                sim::extract_metrics(sl->result, config.sim.tail_fraction).sup_abs_u;
            verdict.str("");
            verdict << "MFC peak < SL peak at " << eps_tag(eps) << ": "
                    << (mfc_sup < sl_sup ? "true" : "false") << " (mfc=" << mfc_sup
                    << ", sl=" << sl_sup << ")";
            report.verdicts.push_back(verdict.str());
        }
        // Implementation equivalence when both MFC realisations are present.
        const Job* eff = find_job(controllers::Mode::MfcEfficient, eps);
        const Job* cls = find_job(controllers::Mode::MfcClassical, eps);
        if (eff != nullptr && cls != nullptr &&
            eff->result.u.size() == cls->result.u.size()) {
            double max_dev = 0.0, max_u = 0.0;
            for (std::size_t s = 0; s < eff->result.u.size(); ++s) {
                max_dev = std::max(max_dev, std::abs(eff->result.u[s] - cls->result.u[s]));
                max_u = std::max(max_u, std::abs(eff->result.u[s]));
            }
            verdict.str("");
            verdict << "efficient vs classical max|u_a-u_b| at " << eps_tag(eps) << ": "
                    << max_dev << " (1e-9*max|u| = " << 1e-9 * max_u << "): "
                    << (max_dev <= 1e-9 * std::max(max_u, 1e-300) ? "true" : "false");
            report.verdicts.push_back(verdict.str());
        }
    }
    // Precision improves as epsilon shrinks (per mode, when swept).
    if (eps_list.size() >= 2) {
        for (const auto mode : mode_list) {
            std::vector<std::pair<double, double>> tails;
            for (double eps : eps_list)
                if (const Job* j = find_job(mode, eps); j != nullptr)
                    tails.emplace_back(
                        eps, sim::extract_metrics(j->result, config.sim.tail_fraction)
                                 .tail_tracking_error);
            if (tails.size() < 2) continue;
            std::sort(tails.begin(), tails.end(),
                      [](auto& a, auto& b) { return a.first > b.first; });
            verdict.str("");
            verdict << controllers::to_string(mode) << " tail error decreases with epsilon:";
            bool decreasing = true;
            for (std::size_t i = 0; i + 1 < tails.size(); ++i)
                decreasing = decreasing && tails[i + 1].second < tails[i].second;
            for (const auto& [eps, tail] : tails)
                verdict << " " << eps_tag(eps) << "->" << tail;
            verdict << ": " << (decreasing ? "true" : "false");
            report.verdicts.push_back(verdict.str());
        }
    }

    // Theorem-2 grid experiment when the scenario declares a grid.
    if (!config.grid_half_width.empty()) {
        bool has_mfc = false, has_sl = false;
        for (const auto mode : mode_list) {
            has_mfc = has_mfc || controllers::mode_has_mcl(mode);
            has_sl = has_sl || mode == controllers::Mode::SingleLoop;
        }
        if (has_mfc && has_sl) {
            if (config.grid_half_width.size() != base.truth.n_xi) {
                report.verdicts.push_back("grid.half_width dimension mismatch; grid skipped");
            } else {
                auto grid = sim::box_grid(base.init.xi0, config.grid_half_width,
                                          config.grid_points_per_axis);
                if (options.seed) {
                    // Deterministic jitter inside each grid cell.
                    std::mt19937_64 rng(*options.seed);
                    std::uniform_real_distribution<double> unit(-0.5, 0.5);
                    std::vector<double> cell(config.grid_half_width.size(), 0.0);
                    for (std::size_t d = 0; d < cell.size(); ++d)
                        cell[d] = config.grid_points_per_axis > 1
                                      ? 2.0 * config.grid_half_width[d] /
                                            double(config.grid_points_per_axis - 1)
                                      : 0.0;
                    for (auto& point : grid)
                        for (std::size_t d = 0; d < point.size(); ++d)
                            point[d] += unit(rng) * cell[d];
                }
                controllers::ControllerSetup mfc_setup = base.controller;
                mfc_setup.mode = controllers::Mode::MfcEfficient;
                const auto table = sim::peaking_experiment(
                    base.truth, mfc_setup, base.ref, base.init, grid, eps_list, config.sim,
                    base.schedule.epochs.empty() ? nullptr : &base.schedule);
                for (const auto& entry : table.entries) {
                    verdict.str("");
                    verdict << "grid peaking at " << eps_tag(entry.epsilon)
                            << ": MFC max sup|u| = " << entry.mfc_max_sup_u
                            << ", SL max sup|u| = " << entry.sl_max_sup_u
                            << ", SL |u_sl(0)| lower bound = " << entry.sl_initial_lower_bound
                            << ", MFC < SL: " << (entry.mfc_below_sl ? "true" : "false")
                            << (entry.any_guard_trip ? " [guard trip in grid]" : "");
                    report.verdicts.push_back(verdict.str());
                }
            }
        }
    }

    render_report(out, report);
    return kExitOk;
}

int cmd_design(const std::string& config_path, const CommandOptions& options, std::ostream& out,
               std::ostream& err) {
    try {
        const ScenarioConfig config = load_scenario(config_path, options);
        const ScenarioBundle bundle = assemble(config);
        const auto& design = bundle.controller.design;

        out << "design report for '" << config.name << "'\n";
        out << "k = [";
        for (std::size_t i = 0; i < design.k.size(); ++i)
            out << (i ? ", " : "") << design.k[i];
        out << "]\n";
        out << "P =\n";
        for (std::size_t i = 0; i < design.P.rows(); ++i) {
            out << "  [";
            for (std::size_t j = 0; j < design.P.cols(); ++j)
                out << (j ? ", " : "") << std::setprecision(10) << design.P(i, j);
            out << "]\n";
        }
        out << "lambda_min(P) = " << design.lambda_min
            << ", lambda_max(P) = " << design.lambda_max << "\n";
        out << "||PB|| = " << design.pb_norm << ", p = sqrt(lmax/lmin) = " << design.p_ratio
            << "\n";
        out << "perturbation bound: delta = " << bundle.bound.delta0
            << ", L_Delta = " << bundle.bound.lipschitz
            << (bundle.bound_fitted ? " (fitted)" : " (given)") << "\n";
        out << "r_d = " << bundle.r_d << ", r_inf = " << config.r_inf << "\n";

        const auto bounds = controllers::epsilon_bounds(design, bundle.bound, bundle.r_d,
                                                        config.r_inf);
        out << "eps_stability < " << bounds.stability << "\n";
        out << "eps_precision < " << bounds.precision << "\n";
        out << "epsilon = " << bundle.epsilon_used
            << (config.epsilon_auto ? " (auto from precision bound)" : "") << "\n";
        if (1.0 / bundle.epsilon_used > 2.0 * design.pb_norm * bundle.bound.lipschitz) {
            out << "predicted ultimate radius p*c_eps(r_d) = "
                << controllers::ultimate_radius(design, bundle.bound, bundle.r_d) << "\n";
        } else {
            out << "predicted ultimate radius: unavailable (stability bound violated)\n";
        }

        if (config.pi) {
            const auto margins =
                ctrlmath::stability_margins(controllers::pi_open_loop(*config.pi));
            out << std::setprecision(4) << "PI open loop: PM " << margins.phase_margin_deg
                << " deg at " << margins.crossover_rad_s << " rad/s\n";
        }
        return kExitOk;
    } catch (const ctrlmath::NotHurwitz& e) {
        err << "design error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int cmd_sweep(const std::string& config_path, std::vector<double> eps_list,
              const CommandOptions& options, std::ostream& out, std::ostream& err) {
    ScenarioConfig config;
    try {
        config = load_scenario(config_path, options);
        if (eps_list.empty()) eps_list = config.eps_list;
        if (eps_list.empty())
            throw ConfigError("sweep needs an epsilon list (flag or grid.eps_list)");
        for (double e : eps_list)
            if (!(e > 0.0 && e < 1.0))
                throw ConfigError("epsilon values must lie in the open interval (0, 1)");
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    return cmd_compare(config_path, {controllers::to_string(config.mode)}, std::move(eps_list),
                       options, out, err);
}

}  // namespace mfc::scenario
