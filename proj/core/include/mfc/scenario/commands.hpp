#pragma once

#include <iosfwd>
#include <optional>

#include "mfc/scenario/presets.hpp"
#include "mfc/scenario/report.hpp"

namespace mfc::scenario {

// Exit-code contract shared by all commands:
//   0 clean run, 1 configuration error, 2 guard trip.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitGuard = 2;

struct CommandOptions {
    std::optional<std::string> preset;  // named preset instead of a config file
    std::string out_dir = ".";
    std::optional<double> step;
    std::optional<double> horizon;
    std::optional<std::uint64_t> seed;  // jitters the peaking grid
    bool dump_config = false;
};

// Loads the scenario from options.preset or the given path and applies the
// command-line overrides. Throws ConfigError on invalid input.
ScenarioConfig load_scenario(const std::string& config_path, const CommandOptions& options);

int cmd_run(const std::string& config_path, const CommandOptions& options, std::ostream& out,
            std::ostream& err);

int cmd_compare(const std::string& config_path, const std::vector<std::string>& modes,
                std::vector<double> eps_list, const CommandOptions& options, std::ostream& out,
                std::ostream& err);

int cmd_design(const std::string& config_path, const CommandOptions& options, std::ostream& out,
               std::ostream& err);

int cmd_sweep(const std::string& config_path, std::vector<double> eps_list,
              const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace mfc::scenario
