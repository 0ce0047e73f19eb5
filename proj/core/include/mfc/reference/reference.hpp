#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mfc::reference {

struct InvalidDuration : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidRadius : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Desired external state xi_d = [y_d, y_d', ..., y_d^(n-1)] and the top
// derivative y_d^(n) at one query time.
struct DesiredState {
    std::vector<double> xi_d;
    double top_derivative = 0.0;
};

// (value, rate, acceleration) of the cubic transition
//   v(t) = v0 + (vT - v0) (3 t^2/T^2 - 2 t^3/T^3),
// clamped to (v0, 0, 0) before t = 0 and (vT, 0, 0) past t = T.
std::array<double, 3> smoothstep_eval(double v0, double vT, double T, double t);

// Converts a vehicle-speed triple (m/s units) to the wheel-speed desired
// state y_d = v / r_r with n_xi = 2.
DesiredState wheel_reference(const std::array<double, 3>& v_ref, double r_r);

// One smoothstep transition request: hold until start_s, then move to
// target over duration_s.
struct Transition {
    double start_s;
    double target;
    double duration_s;
};

// Piecewise reference built from constant segments and smoothstep
// transitions. Value and first derivative are continuous across every
// joint by construction; this is verified to 1e-9 when the signal is built.
// Immutable after construction; sampling is pure.
class ReferenceSignal {
public:
    static ReferenceSignal from_transitions(double initial_value,
                                            std::span<const Transition> transitions,
                                            std::size_t n_derivatives);
    static ReferenceSignal constant(double value, std::size_t n_derivatives);

    DesiredState sample(double t) const;
    std::size_t n_derivatives() const { return n_derivatives_; }
    double final_time() const;  // start of the trailing constant segment

private:
    struct Segment {
        double start;
        double v0;
        double v1;
        double duration;  // 0 marks a constant segment
    };

    ReferenceSignal() = default;
    DesiredState sample_at_segment(std::size_t idx, double t) const;

    std::vector<Segment> segments_;
    std::size_t n_derivatives_ = 0;
};

// Strict bound r_d of ||xi_d||_2: (1 + margin) times the maximum over a
// dense time grid, floored at 1e-12.
double reference_bound(const ReferenceSignal& ref, double horizon, double margin,
                       std::size_t grid_points = 10000);

}  // namespace mfc::reference
