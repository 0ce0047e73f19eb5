#include "mfc/scenario/csv.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mfc::scenario {
namespace {

void append_number(std::string& line, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    line += buf;
}

struct Columns {
    bool mcl;
    bool v_star;
    bool v_tilde;
};

Columns columns_for(controllers::Mode mode) {
    using controllers::Mode;
    switch (mode) {
        case Mode::MfcEfficient:
        case Mode::MfcClassical:
        case Mode::PiMfc: return {true, true, true};
        case Mode::SingleLoop:
        case Mode::PiSingleLoop: return {false, false, true};
    }
    return {false, false, false};
}

}  // namespace

std::string csv_header(const sim::SimResult& result, controllers::Mode mode) {
    const Columns cols = columns_for(mode);
    std::string h = "t";
    for (std::size_t i = 0; i < result.xi.size(); ++i) h += ",xi" + std::to_string(i + 1);
    for (std::size_t i = 0; i < result.eta.size(); ++i) h += ",eta" + std::to_string(i + 1);
    if (cols.mcl)
        for (std::size_t i = 0; i < result.xi.size(); ++i)
            h += ",xi_star" + std::to_string(i + 1);
    h += ",u";
    if (cols.v_star) h += ",v_star";
    if (cols.v_tilde) h += ",v_tilde";
    h += ",yd";
    if (result.xi.size() > 1) h += ",yd_dot";
    return h;
}

void write_csv(std::ostream& out, const sim::SimResult& result, controllers::Mode mode) {
    const Columns cols = columns_for(mode);
    out << csv_header(result, mode) << "\n";
    for (std::size_t s = 0; s < result.times.size(); ++s) {
        std::string line;
        append_number(line, result.times[s]);
        for (const auto& series : result.xi) {
            line += ',';
            append_number(line, series[s]);
        }
        for (const auto& series : result.eta) {
            line += ',';
            append_number(line, series[s]);
        }
        if (cols.mcl)
            for (const auto& series : result.xi_star) {
                line += ',';
                append_number(line, series[s]);
            }
        line += ',';
        append_number(line, result.u[s]);
        if (cols.v_star) {
            line += ',';
            append_number(line, result.v_star[s]);
        }
        if (cols.v_tilde) {
            line += ',';
            append_number(line, result.v_tilde[s]);
        }
        line += ',';
        append_number(line, result.ref_xi[0][s]);
        if (result.xi.size() > 1) {
            line += ',';
            append_number(line, result.ref_xi[1][s]);
        }
        out << line << "\n";
    }
}

void write_csv_file(const std::string& path, const sim::SimResult& result,
                    controllers::Mode mode) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open CSV output path '" + path + "'");
    write_csv(out, result, mode);
}

}  // namespace mfc::scenario
