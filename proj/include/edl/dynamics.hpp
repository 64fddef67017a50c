#pragma once

#include "edl/error.hpp"
#include "edl/state.hpp"

namespace edl {

/// Reinforcement rates (a, c, e), degradation rates (b, d, f) and
/// exogenous intervention inputs (r_H, r_Q, r_M).
struct SystemParams {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
    double d = 1.0;
    double e = 1.0;
    double f = 1.0;
    double r_H = 0.0;
    double r_Q = 0.0;
    double r_M = 0.0;

    bool operator==(const SystemParams&) const = default;
};

/// Synthetic-content gain alpha, noise gain beta, offloading degree u.
struct ControlParams {
    double alpha = 1.0;
    double beta = 1.0;
    double u = 0.5;

    bool operator==(const ControlParams&) const = default;
};

/// AI-generated content volume A and synthetic noise level S.
struct ControlSignals {
    double A = 0.0;
    double S = 0.0;

    bool operator==(const ControlSignals&) const = default;
};

/// Checks every parameter invariant and reports all violations.
ValidationResult validate(const SystemParams& params, const ControlParams& control);

/// Checks that a state lies in the closed nonnegative orthant.
ValidationResult validate_state(const StateVec& state, const char* prefix = "init");

/// Control closure: A = alpha*u*M, S = beta*A. This is the only place the
/// closure is evaluated; the vector field goes through it.
ControlSignals control_signals(const StateVec& state, const ControlParams& control);

/// Vector field (dH/dt, dQ/dt, dM/dt). Unclamped; throws NumericalError naming
/// the component when the result is not finite.
StateVec derivative(const StateVec& state, const SystemParams& params, const ControlParams& control);

}  // namespace edl
