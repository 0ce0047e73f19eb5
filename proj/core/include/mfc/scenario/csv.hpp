#pragma once

#include <iosfwd>
#include <string>

#include "mfc/sim/closed_loop.hpp"

namespace mfc::scenario {

// CSV schema for one run: t, xi*, eta*, model state (when the mode has an
// MCL), u, the control decomposition the mode exposes, then yd and its
// derivatives. Column order is fixed per mode; numbers carry 9 significant
// digits with a locale-independent decimal point.
std::string csv_header(const sim::SimResult& result, controllers::Mode mode);
void write_csv(std::ostream& out, const sim::SimResult& result, controllers::Mode mode);
void write_csv_file(const std::string& path, const sim::SimResult& result,
                    controllers::Mode mode);

}  // namespace mfc::scenario
