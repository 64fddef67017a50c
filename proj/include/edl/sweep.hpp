#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edl/equilibrium.hpp"

namespace edl {

enum class SweepMode { Analytic, Simulated };

std::string_view to_string(SweepMode m);

/// Uniform grid lo, lo+step, ..., up to hi (inclusive within rounding).
/// Points are computed as lo + i*step, not accumulated.
std::vector<double> uniform_grid(double lo, double hi, double step);

struct ThresholdResult {
    std::optional<double> u_c;
    std::optional<std::pair<double, double>> band;
    /// Grid index of u_c when detected.
    std::size_t index = 0;
    /// |second difference of Q*| per grid point; the two ends are 0 (undefined).
    std::vector<double> curvature;

    bool detected() const { return u_c.has_value(); }
};

inline constexpr std::size_t kMinSweepPoints = 8;

/// Locates the point of maximal |second central difference| of Q*(u).
/// The transition band is the contiguous run around u_c whose curvature is at
/// least band_fraction of the maximum. Ties go to the smaller u. A flat
/// (curvature-free) Q* yields a result with no u_c.
ThresholdResult detect_threshold(std::span<const double> u_grid, std::span<const double> q_star,
                                 double band_fraction = 0.5);

struct SweepOptions {
    SweepMode mode = SweepMode::Analytic;
    /// Initial state and integrator for Simulated mode.
    StateVec init{0.5, 0.5, 0.5};
    IntegratorConfig integrator{};
    RegimeThresholds thresholds{};
    double band_fraction = 0.5;
    /// Concurrent grid-point evaluation; results are assembled in grid order.
    unsigned workers = 1;
};

struct SweepResult {
    std::vector<double> u_grid;
    std::vector<StateVec> steady_states;
    std::vector<double> max_re_lambda;
    std::vector<Stability> stability;
    /// Filled in Simulated mode only.
    std::vector<std::optional<Regime>> regimes;
    ThresholdResult threshold;
    SweepMode mode = SweepMode::Analytic;
};

/// Evaluates steady states, eigenvalue summaries and (Simulated mode) regime
/// labels at every grid point, then runs detect_threshold on Q*.
SweepResult sweep_u(const SystemParams& params, double alpha, double beta, std::span<const double> u_grid,
                    const SweepOptions& options = {});

struct InterventionIncrements {
    double r_H = 0.0;
    double r_Q = 0.0;
    double r_M = 0.0;
};

struct InterventionOutcome {
    std::string channel;  // "r_H", "r_Q" or "r_M"
    double increment = 0.0;
    StateVec steady;
    StateVec delta;
    /// Sign (-1, 0, +1) of each component of delta.
    std::array<int, 3> sign{};
};

struct InterventionReport {
    StateVec baseline;
    std::vector<InterventionOutcome> outcomes;
};

/// Steady-state effect of raising each exogenous input separately.
InterventionReport compare_interventions(const SystemParams& params, const ControlParams& control,
                                         const InterventionIncrements& increments);

}  // namespace edl
