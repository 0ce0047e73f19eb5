#include "mfc/reference/reference.hpp"

#include <algorithm>
#include <cmath>

namespace mfc::reference {
namespace {

// Derivatives 0..out.size()-1 of one segment at local time t.
void segment_derivs(double v0, double v1, double T, double t, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    if (out.empty()) return;
    if (T <= 0.0) {  // constant segment
        out[0] = v0;
        return;
    }
    if (t <= 0.0) {
        out[0] = v0;
        return;
    }
    if (t >= T) {
        out[0] = v1;
        return;
    }
    const double dv = v1 - v0;
    const double s = t / T;
    out[0] = v0 + dv * (3.0 * s * s - 2.0 * s * s * s);
    if (out.size() > 1) out[1] = dv * (6.0 * t / (T * T) - 6.0 * t * t / (T * T * T));
    if (out.size() > 2) out[2] = dv * (6.0 / (T * T) - 12.0 * t / (T * T * T));
    if (out.size() > 3) out[3] = dv * (-12.0 / (T * T * T));
}

}  // namespace

std::array<double, 3> smoothstep_eval(double v0, double vT, double T, double t) {
    if (!(T > 0.0)) throw InvalidDuration("smoothstep duration must be positive");
    if (t < 0.0) return {v0, 0.0, 0.0};
    if (t > T) return {vT, 0.0, 0.0};
    std::array<double, 3> out{};
    segment_derivs(v0, vT, T, t, out);
    // Analytic endpoint derivatives, not the clamped ones.
    const double dv = vT - v0;
    if (t == 0.0) out = {v0, 0.0, 6.0 * dv / (T * T)};
    if (t == T) out = {vT, 0.0, -6.0 * dv / (T * T)};
    return out;
}

DesiredState wheel_reference(const std::array<double, 3>& v_ref, double r_r) {
    if (!(r_r > 0.0)) throw InvalidRadius("wheel radius must be positive");
    DesiredState d;
    d.xi_d = {v_ref[0] / r_r, v_ref[1] / r_r};
    d.top_derivative = v_ref[2] / r_r;
    return d;
}

ReferenceSignal ReferenceSignal::constant(double value, std::size_t n_derivatives) {
    ReferenceSignal ref;
    ref.n_derivatives_ = n_derivatives;
    ref.segments_.push_back({0.0, value, value, 0.0});
    return ref;
}

ReferenceSignal ReferenceSignal::from_transitions(double initial_value,
                                                  std::span<const Transition> transitions,
                                                  std::size_t n_derivatives) {
    if (n_derivatives < 1) throw std::invalid_argument("reference needs n_derivatives >= 1");
    ReferenceSignal ref;
    ref.n_derivatives_ = n_derivatives;
    ref.segments_.push_back({0.0, initial_value, initial_value, 0.0});

    double prev_value = initial_value;
    double prev_end = 0.0;
    double prev_start = -1.0;
    for (const auto& tr : transitions) {
        if (!(tr.duration_s > 0.0)) throw InvalidDuration("transition duration must be positive");
        if (!(tr.start_s > prev_start))
            throw std::invalid_argument("segment start times must be strictly increasing");
        if (tr.start_s < prev_end)
            throw std::invalid_argument("transition overlaps the previous one");
        ref.segments_.push_back({tr.start_s, prev_value, tr.target, tr.duration_s});
        prev_value = tr.target;
        prev_end = tr.start_s + tr.duration_s;
        prev_start = tr.start_s;
    }

    // C1 continuity across joints, checked to 1e-9 as built.
    for (std::size_t i = 1; i < ref.segments_.size(); ++i) {
        const double joint = ref.segments_[i].start;
        const auto left = ref.sample_at_segment(i - 1, joint);
        const auto right = ref.sample_at_segment(i, joint);
        if (std::abs(left.xi_d[0] - right.xi_d[0]) > 1e-9 ||
            (left.xi_d.size() > 1 && std::abs(left.xi_d[1] - right.xi_d[1]) > 1e-9))
            throw std::invalid_argument("reference is not C1 across a segment joint");
    }
    return ref;
}

DesiredState ReferenceSignal::sample(double t) const {
    std::size_t idx = 0;
    for (std::size_t i = segments_.size(); i-- > 0;) {
        if (t >= segments_[i].start) {
            idx = i;
            break;
        }
    }
    return sample_at_segment(idx, t);
}

DesiredState ReferenceSignal::sample_at_segment(std::size_t idx, double t) const {
    const Segment& seg = segments_[idx];
    DesiredState d;
    d.xi_d.resize(n_derivatives_);
    std::vector<double> derivs(n_derivatives_ + 1, 0.0);
    segment_derivs(seg.v0, seg.v1, seg.duration, t - seg.start, derivs);
    for (std::size_t i = 0; i < n_derivatives_; ++i) d.xi_d[i] = derivs[i];
    d.top_derivative = derivs[n_derivatives_];
    return d;
}

double ReferenceSignal::final_time() const {
    const Segment& last = segments_.back();
    return last.start + last.duration;
}

double reference_bound(const ReferenceSignal& ref, double horizon, double margin,
                       std::size_t grid_points) {
    if (!(horizon > 0.0) || !(margin > 0.0))
        throw std::invalid_argument("reference_bound needs positive horizon and margin");
    double worst = 0.0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double t = horizon * double(i) / double(grid_points - 1);
        const auto d = ref.sample(t);
        double norm_sq = 0.0;
        for (double v : d.xi_d) norm_sq += v * v;
        worst = std::max(worst, std::sqrt(norm_sq));
    }
    return std::max((1.0 + margin) * worst, 1e-12);
}

}  // namespace mfc::reference
