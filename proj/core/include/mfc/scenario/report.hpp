#pragma once

#include <cstdint>
#include <iosfwd>

#include "mfc/scenario/config.hpp"

namespace mfc::scenario {

inline constexpr const char* kToolkitVersion = "0.1.0";

// Metrics of one closed-loop run plus its provenance.
struct RunRecord {
    std::string label;
    controllers::Mode mode = controllers::Mode::MfcEfficient;
    double epsilon = 0.0;
    sim::Metrics metrics;
    bool aborted = false;
    std::string abort_reason;
    double u0 = 0.0;
    std::string csv_path;
};

// Human-readable verdict report for a command invocation. Every verdict
// line embeds the metric values it was computed from.
struct RunReport {
    std::string scenario_name;
    std::uint64_t config_hash = 0;
    std::string toolkit_version = kToolkitVersion;
    std::vector<RunRecord> runs;
    std::vector<std::string> verdicts;
};

void render_report(std::ostream& out, const RunReport& report);

}  // namespace mfc::scenario
