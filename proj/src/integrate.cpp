#include "edl/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace edl {

ValidationResult validate(const IntegratorConfig& cfg) {
    ValidationResult r;
    if (!std::isfinite(cfg.h) || !(cfg.h > 0.0)) r.add("integrator.h", "be > 0");
    if (!std::isfinite(cfg.T) || !(cfg.T > 0.0)) r.add("integrator.T", "be > 0");
    if (cfg.stride == 0) r.add("integrator.stride", "be >= 1");
    if (r.ok() && cfg.T / cfg.h > static_cast<double>(cfg.max_steps))
        r.add("integrator.T/integrator.h", "not exceed integrator.max_steps (" + std::to_string(cfg.max_steps) + ")");
    return r;
}

std::size_t step_count(const IntegratorConfig& cfg) {
    const double ratio = cfg.T / cfg.h;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) return std::max<std::size_t>(1, static_cast<std::size_t>(nearest));
    return static_cast<std::size_t>(std::ceil(ratio));
}

Trajectory Trajectory::decimate(std::size_t factor) const {
    Trajectory out;
    out.clamp_events = clamp_events;
    if (factor == 0) factor = 1;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; i += factor) {
        out.times.push_back(times[i]);
        out.states.push_back(states[i]);
        out.signals.push_back(signals[i]);
    }
    if (n > 0 && (n - 1) % factor != 0) {
        out.times.push_back(times.back());
        out.states.push_back(states.back());
        out.signals.push_back(signals.back());
    }
    return out;
}

int clamp_to_orthant(StateVec& x) {
    int moved = 0;
    for (int i = 0; i < 3; ++i) {
        if (x[i] < 0.0) {
            x[i] = 0.0;
            ++moved;
        }
    }
    return moved;
}

namespace {

StateVec finish(StateVec x, bool clamp, const char* who) {
    if (!is_finite(x)) throw NumericalError(std::string(who) + ": state is not finite");
    if (clamp) clamp_to_orthant(x);
    return x;
}

StateVec raw_euler(const StateVec& x, const SystemParams& p, const ControlParams& c, double h) {
    return x + h * derivative(x, p, c);
}

StateVec raw_rk4(const StateVec& x, const SystemParams& p, const ControlParams& c, double h) {
    const StateVec k1 = derivative(x, p, c);
    const StateVec k2 = derivative(x + (0.5 * h) * k1, p, c);
    const StateVec k3 = derivative(x + (0.5 * h) * k2, p, c);
    const StateVec k4 = derivative(x + h * k3, p, c);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void require_valid(const StateVec& init, const SystemParams& p, const ControlParams& c,
                   const IntegratorConfig& cfg) {
    ValidationResult r = validate(p, c);
    r.merge(validate(cfg));
    r.merge(validate_state(init));
    r.throw_if_invalid();
}

// Drives the fixed-step loop; `record(k, t, x)` is called for every kept sample.
template <typename Record>
std::size_t run_steps(const StateVec& init, const SystemParams& p, const ControlParams& c,
                      const IntegratorConfig& cfg, Record&& record) {
    const std::size_t n = step_count(cfg);
    std::size_t clamps = 0;
    StateVec x = init;
    record(std::size_t{0}, 0.0, x);
    for (std::size_t k = 0; k < n; ++k) {
        const double t0 = static_cast<double>(k) * cfg.h;
        const double t1 = (k + 1 == n) ? cfg.T : static_cast<double>(k + 1) * cfg.h;
        StateVec next;
        try {
            next = cfg.method == Method::Euler ? raw_euler(x, p, c, t1 - t0) : raw_rk4(x, p, c, t1 - t0);
        } catch (const NumericalError& err) {
            throw DivergenceError(std::string(err.what()) + " at step " + std::to_string(k) + " (t=" +
                                      std::to_string(t0) + ")",
                                  k, t0, x);
        }
        if (!is_finite(next))
            throw DivergenceError("integration diverged at step " + std::to_string(k) + " (t=" +
                                      std::to_string(t0) + ")",
                                  k, t0, x);
        if (cfg.clamp_nonneg) clamps += static_cast<std::size_t>(clamp_to_orthant(next));
        x = next;
        if ((k + 1) % cfg.stride == 0 || k + 1 == n) record(k + 1, t1, x);
    }
    return clamps;
}

}  // namespace

StateVec euler_step(const StateVec& x, const SystemParams& p, const ControlParams& c, double h, bool clamp) {
    return finish(raw_euler(x, p, c, h), clamp, "euler_step");
}

StateVec rk4_step(const StateVec& x, const SystemParams& p, const ControlParams& c, double h, bool clamp) {
    return finish(raw_rk4(x, p, c, h), clamp, "rk4_step");
}

Trajectory integrate(const StateVec& init, const SystemParams& p, const ControlParams& c,
                     const IntegratorConfig& cfg) {
    require_valid(init, p, c, cfg);
    Trajectory traj;
    const std::size_t expected = step_count(cfg) / cfg.stride + 2;
    traj.times.reserve(expected);
    traj.states.reserve(expected);
    traj.signals.reserve(expected);
    traj.clamp_events = run_steps(init, p, c, cfg, [&](std::size_t, double t, const StateVec& x) {
        traj.times.push_back(t);
        traj.states.push_back(x);
        traj.signals.push_back(control_signals(x, c));
    });
    return traj;
}

StateVec propagate(const StateVec& init, const SystemParams& p, const ControlParams& c,
                   const IntegratorConfig& cfg) {
    require_valid(init, p, c, cfg);
    StateVec last = init;
    IntegratorConfig sparse = cfg;
    sparse.stride = step_count(cfg) + 1;
    run_steps(init, p, c, sparse, [&](std::size_t, double, const StateVec& x) { last = x; });
    return last;
}

}  // namespace edl
