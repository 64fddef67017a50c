#pragma once

#include <array>
#include <complex>
#include <string_view>

#include "edl/dynamics.hpp"
#include "edl/integrate.hpp"

namespace edl {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Eigenvalues = std::array<std::complex<double>, 3>;

enum class Stability { StableNode, StableSpiralMixed, Unstable, Marginal };
enum class Regime { Enhancement, Equilibrium, Degeneration, Unclassified };

std::string_view to_string(Stability s);
std::string_view to_string(Regime r);

inline constexpr double kEigenTolerance = 1e-10;

/// Closed-form equilibrium. H* from the H-equation, M* from dQ/dt = 0, Q* from
/// dM/dt = 0. Throws SingularEquilibriumError when u == 0 and NumericalError if
/// the residual check fails.
StateVec fixed_point(const SystemParams& params, const ControlParams& control);

/// The field is linear, so the Jacobian is the same everywhere:
///   [[-b u, 0, 0], [c, 0, -d alpha u], [0, e, -f beta alpha u]].
Mat3 jacobian(const SystemParams& params, const ControlParams& control);

/// Eigenvalues of a Jacobian whose first row vanishes off the diagonal: the
/// decoupled root J[0][0] plus the two roots of the lower 2x2 block, sorted by
/// real part (then imaginary part). Throws std::invalid_argument otherwise.
Eigenvalues eigenvalues(const Mat3& J);

Stability classify_stability(const Eigenvalues& eigs, double eps = kEigenTolerance);

double max_real_part(const Eigenvalues& eigs);

struct EquilibriumReport {
    StateVec fixed_point;
    Mat3 jacobian{};
    Eigenvalues eigenvalues{};
    Stability stability = Stability::Marginal;
    /// ||f(x*)||
    double residual = 0.0;
};

EquilibriumReport analyze_equilibrium(const SystemParams& params, const ControlParams& control);

/// Thresholds of the trajectory regime classifier.
struct RegimeThresholds {
    double eps_eq = 1e-4;
    double s_conv = 1e-4;
    double s_min = 1e-3;
    double delta = 0.1;
    double tail_fraction = 0.1;

    bool operator==(const RegimeThresholds&) const = default;
};

ValidationResult validate(const RegimeThresholds& thresholds);

struct RegimeEvidence {
    /// Tail-window mean of (dx_i/dt) / (1 + x_i), signed.
    std::array<double, 3> tail_slope{};
    /// Tail-window mean of |dx_i/dt| / (1 + x_i).
    std::array<double, 3> tail_abs_slope{};
    /// ||f(x(T))|| / (1 + ||x(T)||)
    double residual = 0.0;
    StateVec initial;
    StateVec final;
    std::size_t window = 0;
    bool converged = false;
};

struct RegimeLabel {
    Regime label = Regime::Unclassified;
    RegimeEvidence evidence;
};

inline constexpr std::size_t kMinRegimeSamples = 20;

/// Labels a trajectory from its tail window (the last tail_fraction of samples):
///  converged + H and Q both down by more than delta -> Degeneration,
///  converged otherwise -> Equilibrium,
///  not converged + every signed tail slope > s_min -> Enhancement,
///  anything else -> Unclassified.
RegimeLabel classify_regime(const Trajectory& traj, const SystemParams& params, const ControlParams& control,
                            const RegimeThresholds& thresholds = {});

/// Re-applies the labelling rules to recorded evidence.
Regime label_from_evidence(const RegimeEvidence& evidence, const RegimeThresholds& thresholds = {});

}  // namespace edl
