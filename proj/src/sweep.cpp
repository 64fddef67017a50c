#include "edl/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace edl {

std::string_view to_string(SweepMode m) { return m == SweepMode::Analytic ? "analytic" : "simulated"; }

std::vector<double> uniform_grid(double lo, double hi, double step) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step) || !(step > 0.0) || hi < lo)
        throw std::invalid_argument("uniform_grid: need finite lo <= hi and step > 0");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = lo + static_cast<double>(i) * step;
    return grid;
}

ThresholdResult detect_threshold(std::span<const double> u, std::span<const double> q, double band_fraction) {
    if (u.size() != q.size()) throw std::invalid_argument("detect_threshold: grid and Q* differ in length");
    if (u.size() < kMinSweepPoints)
        throw std::invalid_argument("detect_threshold: need at least " + std::to_string(kMinSweepPoints) + " points");
    if (!(band_fraction > 0.0) || band_fraction > 1.0)
        throw std::invalid_argument("detect_threshold: band_fraction must lie in (0,1]");
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!std::isfinite(q[i])) throw NumericalError("detect_threshold: Q* is not finite at grid point " + std::to_string(i));
        if (i > 0 && !(u[i] > u[i - 1])) throw std::invalid_argument("detect_threshold: grid must be strictly increasing");
    }

    const std::size_t n = u.size();
    ThresholdResult out;
    out.curvature.assign(n, 0.0);
    double q_scale = 0.0;
    double h_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        q_scale = std::max(q_scale, std::abs(q[i]));
        if (i > 0) h_min = std::min(h_min, u[i] - u[i - 1]);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h_left = u[i] - u[i - 1];
        const double h_right = u[i + 1] - u[i];
        const double second = 2.0 * ((q[i + 1] - q[i]) / h_right - (q[i] - q[i - 1]) / h_left) / (h_left + h_right);
        out.curvature[i] = std::abs(second);
    }

    std::size_t best = 1;
    for (std::size_t i = 2; i + 1 < n; ++i)
        if (out.curvature[i] > out.curvature[best]) best = i;
    const double peak = out.curvature[best];

    // Curvature at the level of rounding noise counts as none.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * q_scale / (h_min * h_min);
    if (!(peak > noise)) return out;

    const double cut = band_fraction * peak;
    std::size_t lo = best;
    std::size_t hi = best;
    while (lo > 1 && out.curvature[lo - 1] >= cut) --lo;
    while (hi + 2 < n && out.curvature[hi + 1] >= cut) ++hi;

    out.u_c = u[best];
    out.index = best;
    out.band = std::make_pair(u[lo], u[hi]);
    return out;
}

namespace {

ValidationResult validate_grid(std::span<const double> grid) {
    ValidationResult r;
    if (grid.size() < kMinSweepPoints)
        r.add("sweep grid", "contain at least " + std::to_string(kMinSweepPoints) + " points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::string name = "u_grid[" + std::to_string(i) + "]";
        if (!std::isfinite(grid[i]) || grid[i] <= 0.0)
            r.add(name, "be > 0 (u = " + std::to_string(grid[i]) + " gives a singular equilibrium)");
        else if (grid[i] > 1.0)
            r.add(name, "lie in (0,1]");
        if (i > 0 && !(grid[i] > grid[i - 1])) r.add(name, "exceed the previous grid point");
    }
    return r;
}

StateVec tail_mean(const Trajectory& traj, double tail_fraction) {
    const std::size_t n = traj.size();
    const std::size_t w =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n))), 1, n);
    StateVec sum;
    for (std::size_t k = n - w; k < n; ++k) sum += traj.states[k];
    return (1.0 / static_cast<double>(w)) * sum;
}

}  // namespace

SweepResult sweep_u(const SystemParams& params, double alpha, double beta, std::span<const double> grid,
                    const SweepOptions& opt) {
    ValidationResult r = validate_grid(grid);
    r.merge(validate(params, ControlParams{alpha, beta, 1.0}));
    if (opt.mode == SweepMode::Simulated) {
        r.merge(validate(opt.integrator));
        r.merge(validate(opt.thresholds));
        r.merge(validate_state(opt.init));
    }
    r.throw_if_invalid();

    const std::size_t n = grid.size();
    SweepResult res;
    res.mode = opt.mode;
    res.u_grid.assign(grid.begin(), grid.end());
    res.steady_states.resize(n);
    res.max_re_lambda.resize(n);
    res.stability.resize(n);
    res.regimes.resize(n);

    auto evaluate = [&](std::size_t i) {
        const ControlParams control{alpha, beta, grid[i]};
        const Eigenvalues ev = eigenvalues(jacobian(params, control));
        res.max_re_lambda[i] = max_real_part(ev);
        res.stability[i] = classify_stability(ev);
        if (opt.mode == SweepMode::Analytic) {
            res.steady_states[i] = fixed_point(params, control);
        } else {
            const Trajectory traj = integrate(opt.init, params, control, opt.integrator);
            res.steady_states[i] = tail_mean(traj, opt.thresholds.tail_fraction);
            res.regimes[i] = classify_regime(traj, params, control, opt.thresholds).label;
        }
    };

    const unsigned workers = std::clamp<unsigned>(opt.workers, 1, static_cast<unsigned>(n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) evaluate(i);
    } else {
        // Each worker owns a strided subset of indices and writes only those slots.
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t i = w; i < n; i += workers) evaluate(i);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = res.steady_states[i].Q;
    res.threshold = detect_threshold(res.u_grid, q, opt.band_fraction);
    return res;
}

InterventionReport compare_interventions(const SystemParams& params, const ControlParams& control,
                                         const InterventionIncrements& inc) {
    ValidationResult r;
    if (!std::isfinite(inc.r_H) || inc.r_H < 0.0) r.add("dr_H", "be >= 0");
    if (!std::isfinite(inc.r_Q) || inc.r_Q < 0.0) r.add("dr_Q", "be >= 0");
    if (!std::isfinite(inc.r_M) || inc.r_M < 0.0) r.add("dr_M", "be >= 0");
    r.throw_if_invalid();

    InterventionReport rep;
    rep.baseline = fixed_point(params, control);

    auto add = [&](const char* channel, double amount, double SystemParams::*field) {
        SystemParams raised = params;
        raised.*field += amount;
        InterventionOutcome o;
        o.channel = channel;
        o.increment = amount;
        o.steady = fixed_point(raised, control);
        o.delta = o.steady - rep.baseline;
        for (int i = 0; i < 3; ++i) o.sign[i] = (o.delta[i] > 0.0) - (o.delta[i] < 0.0);
        rep.outcomes.push_back(o);
    };
    add("r_H", inc.r_H, &SystemParams::r_H);
    add("r_Q", inc.r_Q, &SystemParams::r_Q);
    add("r_M", inc.r_M, &SystemParams::r_M);
    return rep;
}

}  // namespace edl
