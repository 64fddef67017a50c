#pragma once

#include <cstddef>
#include <vector>

#include "edl/dynamics.hpp"

namespace edl {

enum class Method { Euler, RK4 };

struct IntegratorConfig {
    Method method = Method::Euler;
    double h = 0.01;
    double T = 100.0;
    bool clamp_nonneg = true;
    std::size_t max_steps = 10'000'000;
    /// Record every `stride`-th step; the final sample is always kept.
    std::size_t stride = 1;

    bool operator==(const IntegratorConfig&) const = default;
};

ValidationResult validate(const IntegratorConfig& config);

/// Number of steps needed to reach T; the last step may be shorter.
std::size_t step_count(const IntegratorConfig& config);

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVec> states;
    std::vector<ControlSignals> signals;
    /// Number of state components projected back to zero.
    std::size_t clamp_events = 0;

    std::size_t size() const { return times.size(); }
    /// Keeps every `factor`-th sample plus the last one.
    Trajectory decimate(std::size_t factor) const;
};

/// Projects x onto the nonnegative orthant; returns how many components moved.
int clamp_to_orthant(StateVec& x);

StateVec euler_step(const StateVec& x, const SystemParams& params, const ControlParams& control, double h,
                    bool clamp = true);

/// Classical four-stage Runge-Kutta; clamping is applied once to the combined update.
StateVec rk4_step(const StateVec& x, const SystemParams& params, const ControlParams& control, double h,
                  bool clamp = true);

/// Integrates from t = 0 to t = T inclusive, recording states and control signals.
/// Throws DivergenceError with the last finite sample on overflow.
Trajectory integrate(const StateVec& init, const SystemParams& params, const ControlParams& control,
                     const IntegratorConfig& config);

/// Same stepping as integrate() but keeps only the final state.
StateVec propagate(const StateVec& init, const SystemParams& params, const ControlParams& control,
                   const IntegratorConfig& config);

}  // namespace edl
