#pragma once

#include <complex>
#include <vector>

#include "mfc/ctrlmath/matrix.hpp"

namespace mfc::ctrlmath {

struct NoCrossover : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rational transfer function with coefficients in ascending powers of s.
// An explicit 1/s integrator factor is folded into the denominator, which
// allows degree(num) <= degree(den) + 1 before the fold.
struct RationalTransfer {
    std::vector<double> num;
    std::vector<double> den;

    RationalTransfer(std::vector<double> numerator, std::vector<double> denominator);

    std::complex<double> eval(std::complex<double> s) const;
    double magnitude(double omega) const;
    double phase_deg(double omega) const;  // principal value, degrees
};

struct StabilityMargins {
    double crossover_rad_s;
    double phase_margin_deg;  // wrapped to (-180, 180]
};

struct MarginSearch {
    double omega_min = 1e-3;
    double omega_max = 1e4;
    std::size_t grid_points = 2000;
    double bisect_rel_tol = 1e-8;
};

// Gain-crossover frequency and phase margin of the open loop L.
// Scans a logarithmic frequency grid for |L(jw)| = 1 and refines the first
// crossing by bisection. Throws NoCrossover when |L| never crosses unity.
StabilityMargins stability_margins(const RationalTransfer& loop,
                                   const MarginSearch& search = {});

}  // namespace mfc::ctrlmath
