// Test-only reference computations. Nothing here calls the code path it is
// used to check.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "edl/dynamics.hpp"
#include "edl/equilibrium.hpp"

namespace oracle {

using Vec3 = std::array<double, 3>;

/// Vector field written out independently of edl::derivative.
inline Vec3 field(const Vec3& x, const edl::SystemParams& p, const edl::ControlParams& c) {
    const double A = c.alpha * c.u * x[2];
    const double S = c.beta * A;
    return {p.a * (1 - c.u) - p.b * c.u * x[0] + p.r_H, p.c * x[0] - p.d * A + p.r_Q, p.e * x[1] - p.f * S + p.r_M};
}

/// Plain forward Euler with a tiny step, no clamping.
inline Vec3 fine_euler(Vec3 x, const edl::SystemParams& p, const edl::ControlParams& c, double T, double h) {
    const auto n = static_cast<std::int64_t>(std::llround(T / h));
    for (std::int64_t k = 0; k < n; ++k) {
        const Vec3 f = field(x, p, c);
        for (int i = 0; i < 3; ++i) x[i] += h * f[i];
    }
    return x;
}

/// Central finite differences of edl::derivative.
inline edl::Mat3 fd_jacobian(const edl::StateVec& at, const edl::SystemParams& p, const edl::ControlParams& c,
                             double step = 1e-5) {
    edl::Mat3 J{};
    for (int j = 0; j < 3; ++j) {
        edl::StateVec plus = at, minus = at;
        plus[j] += step;
        minus[j] -= step;
        const edl::StateVec fp = edl::derivative(plus, p, c);
        const edl::StateVec fm = edl::derivative(minus, p, c);
        for (int i = 0; i < 3; ++i) J[i][j] = (fp[i] - fm[i]) / (2 * step);
    }
    return J;
}

inline double entropy(const std::vector<double>& p) {
    long double h = 0;
    for (double v : p)
        if (v > 0) h -= static_cast<long double>(v) * std::log(static_cast<long double>(v));
    return static_cast<double>(h);
}

inline double kl(const std::vector<double>& p, const std::vector<double>& q) {
    long double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0) s += static_cast<long double>(p[i]) * std::log(static_cast<long double>(p[i]) / q[i]);
    return static_cast<double>(s);
}

/// Sum over every cell of a K x K joint given as joint[x][y].
inline double mutual_information(const std::vector<std::vector<double>>& joint) {
    const std::size_t K = joint.size();
    std::vector<long double> px(K, 0), py(K, 0);
    for (std::size_t x = 0; x < K; ++x)
        for (std::size_t y = 0; y < K; ++y) {
            px[x] += joint[x][y];
            py[y] += joint[x][y];
        }
    long double mi = 0;
    for (std::size_t x = 0; x < K; ++x)
        for (std::size_t y = 0; y < K; ++y)
            if (joint[x][y] > 0) mi += joint[x][y] * std::log(joint[x][y] / (px[x] * py[y]));
    return static_cast<double>(mi);
}

/// Index of max |q[i-1] - 2 q[i] + q[i+1]| over interior points of a uniform
/// grid, first index on ties.
inline std::size_t brute_force_kink(const std::vector<double>& q) {
    std::size_t best = 1;
    double best_val = -1;
    for (std::size_t i = 1; i + 1 < q.size(); ++i) {
        const double v = std::abs(q[i - 1] - 2 * q[i] + q[i + 1]);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    return best;
}

/// Theil-Sen slope: median of pairwise slopes.
inline double theil_sen(const std::vector<double>& y) {
    std::vector<double> s;
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = i + 1; j < y.size(); ++j) s.push_back((y[j] - y[i]) / static_cast<double>(j - i));
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    return n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

/// Random parameter draw: rates and gains log-uniform in [0.1, 10],
/// u uniform in [0.05, 1], exogenous inputs uniform in [0, 1].
struct Draw {
    edl::SystemParams params;
    edl::ControlParams control;
};

inline Draw random_draw(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> log_rate(std::log(0.1), std::log(10.0));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> offload(0.05, 1.0);
    auto rate = [&] { return std::exp(log_rate(rng)); };
    Draw d;
    d.params = {rate(), rate(), rate(), rate(), rate(), rate(), unit(rng), unit(rng), unit(rng)};
    d.control = {rate(), rate(), offload(rng)};
    return d;
}

}  // namespace oracle
