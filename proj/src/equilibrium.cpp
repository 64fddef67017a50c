#include "edl/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace edl {

std::string_view to_string(Stability s) {
    switch (s) {
        case Stability::StableNode: return "StableNode";
        case Stability::StableSpiralMixed: return "StableSpiralMixed";
        case Stability::Unstable: return "Unstable";
        case Stability::Marginal: return "Marginal";
    }
    return "?";
}

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::Enhancement: return "Enhancement";
        case Regime::Equilibrium: return "Equilibrium";
        case Regime::Degeneration: return "Degeneration";
        case Regime::Unclassified: return "Unclassified";
    }
    return "?";
}

StateVec fixed_point(const SystemParams& p, const ControlParams& c) {
    validate(p, c).throw_if_invalid();
    if (!(p.b * c.u > 0.0))
        throw SingularEquilibriumError("singular equilibrium: b*u = 0 (u = " + std::to_string(c.u) +
                                       "), the H-equation has no finite fixed point");
    const double gain = c.alpha * c.u;
    StateVec x;
    x.H = (p.a * (1.0 - c.u) + p.r_H) / (p.b * c.u);
    x.M = (p.c * x.H + p.r_Q) / (p.d * gain);
    x.Q = (p.f * c.beta * gain * x.M - p.r_M) / p.e;
    if (!is_finite(x)) throw NumericalError("fixed_point: result is not finite");

    const double residual = norm(derivative(x, p, c));
    if (!(residual < 1e-9 * (1.0 + norm(x))))
        throw NumericalError("fixed_point: residual " + std::to_string(residual) + " exceeds tolerance");
    return x;
}

Mat3 jacobian(const SystemParams& p, const ControlParams& c) {
    const double gain = c.alpha * c.u;
    return {{
        {-p.b * c.u, 0.0, 0.0},
        {p.c, 0.0, -p.d * gain},
        {0.0, p.e, -p.f * c.beta * gain},
    }};
}

Eigenvalues eigenvalues(const Mat3& J) {
    if (J[0][1] != 0.0 || J[0][2] != 0.0)
        throw std::invalid_argument("eigenvalues: first row must vanish off the diagonal");

    // Lower block [[J11, J12], [J21, J22]]: lambda^2 - tr*lambda + det = 0.
    const double half_tr = 0.5 * (J[1][1] + J[2][2]);
    const double det = J[1][1] * J[2][2] - J[1][2] * J[2][1];
    const double disc = half_tr * half_tr - det;

    Eigenvalues ev;
    ev[0] = {J[0][0], 0.0};
    if (disc >= 0.0) {
        // Avoid cancellation: take the root of larger magnitude first.
        const double q = half_tr + std::copysign(std::sqrt(disc), half_tr);
        ev[1] = {q, 0.0};
        ev[2] = {q != 0.0 ? det / q : 0.0, 0.0};
    } else {
        const double im = std::sqrt(-disc);
        ev[1] = {half_tr, -im};
        ev[2] = {half_tr, im};
    }
    std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return ev;
}

double max_real_part(const Eigenvalues& eigs) {
    double m = eigs[0].real();
    for (const auto& z : eigs) m = std::max(m, z.real());
    return m;
}

Stability classify_stability(const Eigenvalues& eigs, double eps) {
    const double max_re = max_real_part(eigs);
    if (max_re > eps) return Stability::Unstable;
    if (max_re >= -eps) return Stability::Marginal;
    const bool oscillatory =
        std::any_of(eigs.begin(), eigs.end(), [eps](const auto& z) { return std::abs(z.imag()) > eps; });
    return oscillatory ? Stability::StableSpiralMixed : Stability::StableNode;
}

EquilibriumReport analyze_equilibrium(const SystemParams& p, const ControlParams& c) {
    EquilibriumReport rep;
    rep.fixed_point = fixed_point(p, c);
    rep.jacobian = jacobian(p, c);
    rep.eigenvalues = eigenvalues(rep.jacobian);
    rep.stability = classify_stability(rep.eigenvalues);
    rep.residual = norm(derivative(rep.fixed_point, p, c));
    return rep;
}

ValidationResult validate(const RegimeThresholds& t) {
    ValidationResult r;
    auto positive = [&](const char* name, double v) {
        if (!std::isfinite(v) || !(v > 0.0)) r.add(name, "be > 0");
    };
    positive("regime.eps_eq", t.eps_eq);
    positive("regime.s_conv", t.s_conv);
    positive("regime.s_min", t.s_min);
    if (!std::isfinite(t.delta) || t.delta < 0.0 || t.delta >= 1.0) r.add("regime.delta", "lie in [0,1)");
    if (!std::isfinite(t.tail_fraction) || !(t.tail_fraction > 0.0) || t.tail_fraction > 1.0)
        r.add("regime.tail_fraction", "lie in (0,1]");
    return r;
}

Regime label_from_evidence(const RegimeEvidence& ev, const RegimeThresholds& t) {
    if (ev.converged) {
        const double keep = 1.0 - t.delta;
        if (ev.final.H < keep * ev.initial.H && ev.final.Q < keep * ev.initial.Q) return Regime::Degeneration;
        return Regime::Equilibrium;
    }
    const bool growing =
        std::all_of(ev.tail_slope.begin(), ev.tail_slope.end(), [&](double s) { return s > t.s_min; });
    return growing ? Regime::Enhancement : Regime::Unclassified;
}

RegimeLabel classify_regime(const Trajectory& traj, const SystemParams& p, const ControlParams& c,
                            const RegimeThresholds& t) {
    validate(t).throw_if_invalid();
    const std::size_t n = traj.size();
    if (n < kMinRegimeSamples)
        throw std::invalid_argument("classify_regime: trajectory has " + std::to_string(n) + " samples, need at least " +
                                    std::to_string(kMinRegimeSamples));

    RegimeLabel out;
    RegimeEvidence& ev = out.evidence;
    ev.window = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(t.tail_fraction * static_cast<double>(n))));
    ev.initial = traj.states.front();
    ev.final = traj.states.back();

    const std::size_t first = n - ev.window;
    const double pairs = static_cast<double>(ev.window - 1);
    for (std::size_t k = first; k + 1 < n; ++k) {
        const double dt = traj.times[k + 1] - traj.times[k];
        for (int i = 0; i < 3; ++i) {
            const double rel = (traj.states[k + 1][i] - traj.states[k][i]) / dt / (1.0 + traj.states[k][i]);
            ev.tail_slope[i] += rel / pairs;
            ev.tail_abs_slope[i] += std::abs(rel) / pairs;
        }
    }
    ev.residual = norm(derivative(ev.final, p, c)) / (1.0 + norm(ev.final));
    ev.converged = ev.residual < t.eps_eq &&
                   std::all_of(ev.tail_abs_slope.begin(), ev.tail_abs_slope.end(),
                               [&](double s) { return s < t.s_conv; });
    out.label = label_from_evidence(ev, t);
    return out;
}

}  // namespace edl
