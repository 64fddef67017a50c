#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "edl/error.hpp"

namespace edl::info {

inline constexpr double kNormTolerance = 1e-12;

/// Probability vector over K >= 2 symbols. Construction checks that the masses
/// are nonnegative and sum to 1; use normalized() to rescale explicitly.
class Dist {
public:
    explicit Dist(std::vector<double> probs);

    /// Rescales nonnegative weights to unit mass. Throws if the total is zero.
    static Dist normalized(std::vector<double> weights);
    static Dist uniform(std::size_t K);
    static Dist point_mass(std::size_t K, std::size_t index);
    /// Mass proportional to rank^(-exponent), rank = 1..K.
    static Dist zipf(std::size_t K, double exponent = 1.0);

    std::span<const double> probs() const { return probs_; }
    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    std::size_t argmax() const;

    bool operator==(const Dist&) const = default;

private:
    std::vector<double> probs_;
};

/// K x K joint distribution, row-major, rows indexed by x.
struct Joint {
    std::size_t K = 0;
    std::vector<double> cells;

    double operator()(std::size_t x, std::size_t y) const { return cells[x * K + y]; }
};

struct InfoConfig {
    double u = 0.9;
    /// Synthetic fraction of the training mix; defaults to u.
    std::optional<double> lambda;
    /// Sharpening temperature; defaults to 1 - 0.8 u.
    std::optional<double> tau;
    double epsilon_tail = 1e-4;
    double kappa = 0.5;
    double smoothing = 1e-12;

    double lambda_value() const { return lambda.value_or(u); }
    double tau_value() const { return tau.value_or(1.0 - 0.8 * u); }

    bool operator==(const InfoConfig&) const = default;
};

ValidationResult validate(const InfoConfig& cfg);

struct GenerationState {
    Dist world;
    Dist human;
    Dist model;
    int generation = 0;
};

/// world = Zipf(K, exponent); human and model both start equal to world.
GenerationState initial_state(std::size_t K = 64, double zipf_exponent = 1.0);

struct InfoMetrics {
    int generation = 0;
    double entropy_human = 0.0;
    double entropy_model = 0.0;
    double kl_model_human = 0.0;
    double kl_model_world = 0.0;
    std::size_t tail_support = 0;
    /// I(H_{g-1}; H_g) through the copy-persistence channel.
    double mi_consecutive = 0.0;

    bool operator==(const InfoMetrics&) const = default;
};

/// Shannon entropy in nats, with 0 ln 0 = 0.
double shannon_entropy(const Dist& d);

/// KL(p || q~) in nats, where q~ = (q + smoothing) renormalized.
double kl_divergence(const Dist& p, const Dist& q, double smoothing = 1e-12);

double mutual_information(const Joint& joint);

/// Raises each mass to 1/tau and renormalizes; tau in (0,1].
Dist sharpen(const Dist& d, double tau);

/// Zeroes cells below epsilon and renormalizes. Throws NumericalError if
/// nothing survives.
Dist truncate_tail(const Dist& d, double epsilon);

/// Number of symbols with positive mass >= epsilon.
std::size_t tail_support(const Dist& d, double epsilon);

/// Joint of the copy-persistence channel:
///   p(x, y) = prev(x) * [kappa * [y == x] + (1 - kappa) * next(y)].
Joint copy_channel_joint(const Dist& prev, const Dist& next, double kappa);

double consecutive_mi(const Dist& prev_human, const Dist& next_human, const InfoConfig& cfg);

/// One closed-loop generation:
///   human' = (1-u) world + u sharpen(model, tau)
///   mix    = (1-lambda) human' + lambda model
///   model' = truncate_tail(mix, epsilon_tail)
GenerationState step_generation(const GenerationState& state, const InfoConfig& cfg);

InfoMetrics measure(const GenerationState& state, const InfoConfig& cfg, double mi_consecutive);

/// Iterates step_generation T_gen times; row g holds the metrics after
/// generation g (1..T_gen).
std::vector<InfoMetrics> run_generations(const GenerationState& init, const InfoConfig& cfg, int generations);

}  // namespace edl::info
