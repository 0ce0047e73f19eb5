#include "mfc/scenario/report.hpp"

#include <iomanip>
#include <ostream>

namespace mfc::scenario {

void render_report(std::ostream& out, const RunReport& report) {
    out << "scenario: " << report.scenario_name << "  (config " << std::hex << std::setw(16)
        << std::setfill('0') << report.config_hash << std::dec << std::setfill(' ')
        << ", toolkit " << report.toolkit_version << ")\n";
    if (!report.runs.empty()) {
        out << std::left << std::setw(28) << "run" << std::right << std::setw(12) << "sup|u|"
            << std::setw(14) << "tail_error" << std::setw(12) << "eta_sup" << std::setw(9)
            << "settled" << std::setw(9) << "status" << "\n";
        for (const auto& r : report.runs) {
            out << std::left << std::setw(28) << r.label << std::right << std::setw(12)
                << std::setprecision(6) << r.metrics.sup_abs_u << std::setw(14)
                << r.metrics.tail_tracking_error << std::setw(12) << r.metrics.eta_sup
                << std::setw(9) << (r.metrics.settled ? "yes" : "no") << std::setw(9)
                << (r.aborted ? "GUARD" : "ok") << "\n";
        }
    }
    for (const auto& v : report.verdicts) out << "verdict: " << v << "\n";
}

}  // namespace mfc::scenario
