#pragma once

#include <span>
#include <vector>

#include "mfc/ctrlmath/lyapunov.hpp"
#include "mfc/ctrlmath/matrix.hpp"
#include "mfc/plant/plant.hpp"

namespace mfc::controllers {

struct InvalidScaling : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidPrecision : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct StabilityBoundViolated : std::domain_error {
    using std::domain_error::domain_error;
};

// Scaled gain with components k_i / eps^(n_xi - i + 1), 1-based.
std::vector<double> scale_gain(std::span<const double> k, double epsilon);

// High-gain design data for a Brunovsky pair of dimension k.size():
// unscaled gain k with A - B k^T Hurwitz, the Lyapunov solution P of
// (A - B k^T)^T P + P (A - B k^T) = -I, its eigenvalue extremes, the
// ratio p = sqrt(lambda_max/lambda_min) and ||P B||_2.
struct GainDesign {
    std::vector<double> k;
    double epsilon = 1.0;
    std::vector<double> k_scaled;
    ctrlmath::Matrix P;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double p_ratio = 0.0;
    double pb_norm = 0.0;

    std::size_t n_xi() const { return k.size(); }
    GainDesign with_epsilon(double epsilon) const;
};

// Builds the design artifacts; throws ctrlmath::NotHurwitz when A - B k^T
// is not Hurwitz and InvalidScaling for epsilon outside (0, 1].
GainDesign make_gain_design(std::vector<double> k, double epsilon);

// Upper bounds on the scaling from Theorem-1-style inequalities, capped at 1:
//   stability:  1/eps > 2 ||PB|| L_Delta
//   precision:  1/eps > 2 ||PB|| sqrt(lmax/lmin) (delta + L_Delta r_d)/r_inf
//                       + 2 ||PB|| L_Delta
// Valid scalings are any eps strictly below the returned values.
struct EpsilonBounds {
    double stability;
    double precision;
};
EpsilonBounds epsilon_bounds(const GainDesign& design, const plant::PerturbationBound& bound,
                             double r_d, double r_inf);

// Predicted ultimate-bound radius p * c_eps(r) with c = 2||PB|| and
// c_eps(x) = c (delta + L_Delta x) / (1/eps - c L_Delta).
double ultimate_radius(const GainDesign& design, const plant::PerturbationBound& bound, double r);

}  // namespace mfc::controllers
