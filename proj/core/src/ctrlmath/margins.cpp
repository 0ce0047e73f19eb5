#include "mfc/ctrlmath/margins.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mfc::ctrlmath {
namespace {

std::complex<double> horner(const std::vector<double>& coeffs, std::complex<double> s) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * s + coeffs[i];
    return acc;
}

double wrap_half_open(double deg) {
    while (deg > 180.0) deg -= 360.0;
    while (deg <= -180.0) deg += 360.0;
    return deg;
}

}  // namespace

RationalTransfer::RationalTransfer(std::vector<double> numerator, std::vector<double> denominator)
    : num(std::move(numerator)), den(std::move(denominator)) {
    if (den.empty() || den.back() == 0.0)
        throw std::invalid_argument("leading denominator coefficient must be nonzero");
    if (num.empty()) throw std::invalid_argument("numerator must be nonempty");
    if (num.size() > den.size() + 1)
        throw std::invalid_argument("degree(num) must be <= degree(den) + 1");
}

std::complex<double> RationalTransfer::eval(std::complex<double> s) const {
    return horner(num, s) / horner(den, s);
}

double RationalTransfer::magnitude(double omega) const {
    return std::abs(eval({0.0, omega}));
}

double RationalTransfer::phase_deg(double omega) const {
    const auto v = eval({0.0, omega});
    return std::arg(v) * 180.0 / std::numbers::pi;
}

StabilityMargins stability_margins(const RationalTransfer& loop, const MarginSearch& search) {
    if (!(search.omega_min > 0.0 && search.omega_max > search.omega_min))
        throw std::invalid_argument("margin search needs 0 < omega_min < omega_max");

    const double log_lo = std::log(search.omega_min);
    const double log_hi = std::log(search.omega_max);
    const std::size_t n = std::max<std::size_t>(search.grid_points, 2);

    auto excess = [&](double omega) { return loop.magnitude(omega) - 1.0; };

    double w_prev = search.omega_min;
    double g_prev = excess(w_prev);
    double lo = 0.0, hi = 0.0;
    bool bracketed = false;
    if (g_prev == 0.0) {
        lo = hi = w_prev;
        bracketed = true;
    }
    for (std::size_t i = 1; i < n && !bracketed; ++i) {
        const double w = std::exp(log_lo + (log_hi - log_lo) * double(i) / double(n - 1));
        const double g = excess(w);
        if (g == 0.0) {
            lo = hi = w;
            bracketed = true;
        } else if (g_prev * g < 0.0) {
            lo = w_prev;
            hi = w;
            bracketed = true;
        }
        w_prev = w;
        g_prev = g;
    }
    if (!bracketed)
        throw NoCrossover("|L(jw)| never crosses unity on the search interval");

    double w_c = 0.5 * (lo + hi);
    if (lo != hi) {
        double g_lo = excess(lo);
        while ((hi - lo) > search.bisect_rel_tol * hi) {
            w_c = 0.5 * (lo + hi);
            const double g_mid = excess(w_c);
            if (g_mid == 0.0) {
                lo = hi = w_c;
                break;
            }
            if (g_lo * g_mid < 0.0) {
                hi = w_c;
            } else {
                lo = w_c;
                g_lo = g_mid;
            }
        }
        w_c = 0.5 * (lo + hi);
    }

    const double pm = wrap_half_open(180.0 + loop.phase_deg(w_c));
    return {w_c, pm};
}

}  // namespace mfc::ctrlmath
