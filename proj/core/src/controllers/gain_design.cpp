#include "mfc/controllers/gain_design.hpp"

#include <cmath>

namespace mfc::controllers {

std::vector<double> scale_gain(std::span<const double> k, double epsilon) {
    if (k.empty()) throw std::invalid_argument("gain vector must be nonempty");
    if (!(epsilon > 0.0)) throw InvalidScaling("scaling epsilon must be positive");
    const std::size_t n = k.size();
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = k[i] / std::pow(epsilon, double(n - i));
    return scaled;
}

GainDesign make_gain_design(std::vector<double> k, double epsilon) {
    if (k.empty()) throw std::invalid_argument("gain vector must be nonempty");
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw InvalidScaling("scaling epsilon must lie in (0, 1]");

    const std::size_t n = k.size();
    auto [a, b] = plant::brunovsky_pair(n);
    ctrlmath::Matrix a_cl = a;
    for (std::size_t j = 0; j < n; ++j) a_cl(n - 1, j) -= k[j];

    GainDesign d;
    d.k = std::move(k);
    d.epsilon = epsilon;
    d.k_scaled = scale_gain(d.k, epsilon);
    d.P = ctrlmath::solve_lyapunov(a_cl);
    const auto [lmin, lmax] = ctrlmath::sym_eig_extremes(d.P);
    d.lambda_min = lmin;
    d.lambda_max = lmax;
    d.p_ratio = std::sqrt(lmax / lmin);
    double pb_sq = 0.0;  // B = e_n, so P B is the last column of P
    for (std::size_t i = 0; i < n; ++i) pb_sq += d.P(i, n - 1) * d.P(i, n - 1);
    d.pb_norm = std::sqrt(pb_sq);
    return d;
}

GainDesign GainDesign::with_epsilon(double new_epsilon) const {
    if (!(new_epsilon > 0.0 && new_epsilon <= 1.0))
        throw InvalidScaling("scaling epsilon must lie in (0, 1]");
    GainDesign d = *this;
    d.epsilon = new_epsilon;
    d.k_scaled = scale_gain(d.k, new_epsilon);
    return d;
}

EpsilonBounds epsilon_bounds(const GainDesign& design, const plant::PerturbationBound& bound,
                             double r_d, double r_inf) {
    if (!(r_inf > 0.0)) throw InvalidPrecision("tracking precision r_inf must be positive");
    if (!(design.lambda_min > 0.0)) throw std::invalid_argument("design P is not positive definite");
    if (r_d < 0.0) throw std::invalid_argument("reference bound r_d must be nonnegative");

    const double c = 2.0 * design.pb_norm;
    EpsilonBounds out;
    out.stability = bound.lipschitz > 0.0 ? std::min(1.0, 1.0 / (c * bound.lipschitz)) : 1.0;
    const double denom =
        c * design.p_ratio * (bound.delta0 + bound.lipschitz * r_d) / r_inf + c * bound.lipschitz;
    out.precision = denom > 1.0 ? 1.0 / denom : 1.0;
    return out;
}

double ultimate_radius(const GainDesign& design, const plant::PerturbationBound& bound, double r) {
    const double c = 2.0 * design.pb_norm;
    const double inv_eps = 1.0 / design.epsilon;
    if (!(inv_eps > c * bound.lipschitz))
        throw StabilityBoundViolated("1/eps must exceed 2*||PB||*L_Delta");
    const double c_eps = c * (bound.delta0 + bound.lipschitz * r) / (inv_eps - c * bound.lipschitz);
    return design.p_ratio * c_eps;
}

}  // namespace mfc::controllers
