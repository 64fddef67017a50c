#include "edl/infodyn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace edl::info {

namespace {

double total(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

void require_same_size(const Dist& a, const Dist& b, const char* who) {
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(who) + ": distributions have different support sizes");
}

}  // namespace

Dist::Dist(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.size() < 2) throw std::invalid_argument("Dist: need at least 2 symbols");
    for (double p : probs_)
        if (!std::isfinite(p) || p < 0.0) throw std::invalid_argument("Dist: masses must be finite and >= 0");
    const double s = total(probs_);
    if (std::abs(s - 1.0) > kNormTolerance)
        throw std::invalid_argument("Dist: masses sum to " + std::to_string(s) + ", not 1");
}

Dist Dist::normalized(std::vector<double> weights) {
    for (double w : weights)
        if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("Dist::normalized: weights must be finite and >= 0");
    const double s = total(weights);
    if (!(s > 0.0)) throw NumericalError("Dist::normalized: total mass is zero");
    for (double& w : weights) w /= s;
    return Dist(std::move(weights));
}

Dist Dist::uniform(std::size_t K) { return normalized(std::vector<double>(K, 1.0)); }

Dist Dist::point_mass(std::size_t K, std::size_t index) {
    if (index >= K) throw std::out_of_range("Dist::point_mass: index out of range");
    std::vector<double> p(K, 0.0);
    p[index] = 1.0;
    return Dist(std::move(p));
}

Dist Dist::zipf(std::size_t K, double exponent) {
    std::vector<double> w(K);
    for (std::size_t i = 0; i < K; ++i) w[i] = std::pow(static_cast<double>(i + 1), -exponent);
    return normalized(std::move(w));
}

std::size_t Dist::argmax() const {
    return static_cast<std::size_t>(std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
}

ValidationResult validate(const InfoConfig& c) {
    ValidationResult r;
    auto unit = [&](const char* name, double v) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) r.add(name, "lie in [0,1]");
    };
    unit("infodyn.u", c.u);
    unit("infodyn.lambda", c.lambda_value());
    const double tau = c.tau_value();
    if (!std::isfinite(tau) || !(tau > 0.0) || tau > 1.0) r.add("infodyn.tau", "lie in (0,1]");
    if (!std::isfinite(c.epsilon_tail) || c.epsilon_tail < 0.0) r.add("infodyn.epsilon_tail", "be >= 0");
    unit("infodyn.kappa", c.kappa);
    if (!std::isfinite(c.smoothing) || !(c.smoothing > 0.0)) r.add("infodyn.smoothing", "be > 0");
    return r;
}

GenerationState initial_state(std::size_t K, double zipf_exponent) {
    Dist world = Dist::zipf(K, zipf_exponent);
    return {world, world, world, 0};
}

double shannon_entropy(const Dist& d) {
    double h = 0.0;
    for (double p : d.probs())
        if (p > 0.0) h -= p * std::log(p);
    return h;
}

double kl_divergence(const Dist& p, const Dist& q, double smoothing) {
    require_same_size(p, q, "kl_divergence");
    const double scale = 1.0 + smoothing * static_cast<double>(q.size());
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) kl += p[i] * std::log(p[i] * scale / (q[i] + smoothing));
    }
    return std::max(kl, 0.0);
}

double mutual_information(const Joint& j) {
    if (j.K == 0 || j.cells.size() != j.K * j.K) throw std::invalid_argument("mutual_information: joint must be K x K");
    std::vector<double> px(j.K, 0.0);
    std::vector<double> py(j.K, 0.0);
    for (std::size_t x = 0; x < j.K; ++x)
        for (std::size_t y = 0; y < j.K; ++y) {
            const double v = j(x, y);
            if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("mutual_information: cells must be >= 0");
            px[x] += v;
            py[y] += v;
        }
    double mi = 0.0;
    for (std::size_t x = 0; x < j.K; ++x)
        for (std::size_t y = 0; y < j.K; ++y) {
            const double v = j(x, y);
            if (v > 0.0) mi += v * std::log(v / (px[x] * py[y]));
        }
    return std::max(mi, 0.0);
}

Dist sharpen(const Dist& d, double tau) {
    if (!std::isfinite(tau) || !(tau > 0.0) || tau > 1.0) throw std::invalid_argument("sharpen: tau must lie in (0,1]");
    // Work in log space so small tau does not underflow the whole vector.
    const double log_max = std::log(d[d.argmax()]);
    std::vector<double> w(d.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > 0.0) w[i] = std::exp((std::log(d[i]) - log_max) / tau);
    return Dist::normalized(std::move(w));
}

Dist truncate_tail(const Dist& d, double epsilon) {
    std::vector<double> w(d.probs().begin(), d.probs().end());
    for (double& p : w)
        if (p < epsilon) p = 0.0;
    if (!(total(w) > 0.0)) throw NumericalError("truncate_tail: epsilon_tail removes all probability mass");
    return Dist::normalized(std::move(w));
}

std::size_t tail_support(const Dist& d, double epsilon) {
    return static_cast<std::size_t>(
        std::count_if(d.probs().begin(), d.probs().end(), [&](double p) { return p > 0.0 && p >= epsilon; }));
}

Joint copy_channel_joint(const Dist& prev, const Dist& next, double kappa) {
    require_same_size(prev, next, "copy_channel_joint");
    const std::size_t K = prev.size();
    Joint j{K, std::vector<double>(K * K)};
    for (std::size_t x = 0; x < K; ++x)
        for (std::size_t y = 0; y < K; ++y)
            j.cells[x * K + y] = prev[x] * ((x == y ? kappa : 0.0) + (1.0 - kappa) * next[y]);
    return j;
}

double consecutive_mi(const Dist& prev_human, const Dist& next_human, const InfoConfig& cfg) {
    return mutual_information(copy_channel_joint(prev_human, next_human, cfg.kappa));
}

GenerationState step_generation(const GenerationState& s, const InfoConfig& cfg) {
    validate(cfg).throw_if_invalid();
    require_same_size(s.world, s.human, "step_generation");
    require_same_size(s.world, s.model, "step_generation");

    const double u = cfg.u;
    const double lambda = cfg.lambda_value();
    const std::size_t K = s.world.size();

    const Dist sharp = sharpen(s.model, cfg.tau_value());
    std::vector<double> human(K);
    for (std::size_t i = 0; i < K; ++i) human[i] = (1.0 - u) * s.world[i] + u * sharp[i];
    Dist next_human = Dist::normalized(std::move(human));

    std::vector<double> mix(K);
    for (std::size_t i = 0; i < K; ++i) mix[i] = (1.0 - lambda) * next_human[i] + lambda * s.model[i];
    Dist next_model = truncate_tail(Dist::normalized(std::move(mix)), cfg.epsilon_tail);

    return {s.world, std::move(next_human), std::move(next_model), s.generation + 1};
}

InfoMetrics measure(const GenerationState& s, const InfoConfig& cfg, double mi) {
    InfoMetrics m;
    m.generation = s.generation;
    m.entropy_human = shannon_entropy(s.human);
    m.entropy_model = shannon_entropy(s.model);
    m.kl_model_human = kl_divergence(s.model, s.human, cfg.smoothing);
    m.kl_model_world = kl_divergence(s.model, s.world, cfg.smoothing);
    m.tail_support = tail_support(s.model, cfg.epsilon_tail);
    m.mi_consecutive = mi;
    return m;
}

std::vector<InfoMetrics> run_generations(const GenerationState& init, const InfoConfig& cfg, int generations) {
    if (generations < 2) throw std::invalid_argument("run_generations: need at least 2 generations");
    validate(cfg).throw_if_invalid();
    std::vector<InfoMetrics> series;
    series.reserve(static_cast<std::size_t>(generations));
    GenerationState state = init;
    for (int g = 0; g < generations; ++g) {
        GenerationState next = step_generation(state, cfg);
        const double mi = consecutive_mi(state.human, next.human, cfg);
        state = std::move(next);
        series.push_back(measure(state, cfg, mi));
    }
    return series;
}

}  // namespace edl::info
