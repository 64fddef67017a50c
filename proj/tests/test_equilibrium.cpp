#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

#include "edl/equilibrium.hpp"
#include "oracles.hpp"

using namespace edl;

namespace {

std::vector<std::complex<double>> eigen_reference(const Mat3& J) {
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = J[i][j];
    Eigen::EigenSolver<Eigen::Matrix3d> solver(m, false);
    std::vector<std::complex<double>> out(solver.eigenvalues().begin(), solver.eigenvalues().end());
    std::sort(out.begin(), out.end(), [](auto x, auto y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return out;
}

Trajectory run(const StateVec& x0, const SystemParams& p, const ControlParams& c, double T, double h = 0.01) {
    IntegratorConfig cfg;
    cfg.T = T;
    cfg.h = h;
    return integrate(x0, p, c, cfg);
}

}  // namespace

TEST_CASE("fixed point for unit rates at u = 0.5") {
    const StateVec x = fixed_point({}, {1, 1, 0.5});
    CHECK(x.H == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x.Q == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x.M == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("fixed point is singular at u = 0") {
    CHECK_THROWS_AS(fixed_point({}, {1, 1, 0}), SingularEquilibriumError);
}

TEST_CASE("fixed point with exogenous inputs") {
    SystemParams p;
    p.r_H = p.r_Q = p.r_M = 0.2;
    const StateVec x = fixed_point(p, {1, 1, 0.5});
    CHECK(x.H == doctest::Approx(1.4).epsilon(1e-12));
    CHECK(x.Q == doctest::Approx(1.4).epsilon(1e-12));
    CHECK(x.M == doctest::Approx(3.2).epsilon(1e-12));
}

TEST_CASE("fixed point annihilates the field for random parameters") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
        const auto d = oracle::random_draw(rng);
        const StateVec x = fixed_point(d.params, d.control);
        const auto f = oracle::field({x.H, x.Q, x.M}, d.params, d.control);
        const double scale = 1 + norm(x);
        for (double v : f) CHECK(std::abs(v) <= 1e-9 * scale);
    }
}

TEST_CASE("jacobian matches finite differences of the field") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = oracle::random_draw(rng);
        const Mat3 J = jacobian(d.params, d.control);
        const Mat3 fd = oracle::fd_jacobian({0.3, 1.7, 2.2}, d.params, d.control);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(J[i][j] == doctest::Approx(fd[i][j]).epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("jacobian example") {
    const Mat3 J = jacobian({}, {1, 1, 0.5});
    const Mat3 expected{{{-0.5, 0, 0}, {1, 0, -0.5}, {0, 1, -0.5}}};
    CHECK(J == expected);
}

TEST_CASE("eigenvalues agree with a general eigensolver") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        const auto d = oracle::random_draw(rng);
        const Mat3 J = jacobian(d.params, d.control);
        const Eigenvalues ours = eigenvalues(J);
        const auto ref = eigen_reference(J);
        double scale = 0;
        for (auto z : ref) scale = std::max(scale, std::abs(z));
        // Pair each reference root with its nearest computed root.
        for (auto z : ref) {
            double best = 1e300;
            for (auto w : ours) best = std::min(best, std::abs(z - w));
            CHECK(best <= 1e-9 * (1 + scale));
        }
        CHECK(ours[0].real() <= ours[1].real());
        CHECK(ours[1].real() <= ours[2].real());
    }
}

TEST_CASE("eigenvalues reject a coupled first row") {
    Mat3 J = jacobian({}, {1, 1, 0.5});
    J[0][2] = 1;
    CHECK_THROWS_AS(eigenvalues(J), std::invalid_argument);
}

TEST_CASE("stability classes") {
    using C = std::complex<double>;
    CHECK(classify_stability({C{-3, 0}, C{-2, 0}, C{-1, 0}}) == Stability::StableNode);
    CHECK(classify_stability({C{-3, 0}, C{-1, -2}, C{-1, 2}}) == Stability::StableSpiralMixed);
    CHECK(classify_stability({C{-3, 0}, C{-1, 0}, C{0.5, 0}}) == Stability::Unstable);
    CHECK(classify_stability({C{-3, 0}, C{-1, 0}, C{0, 0}}) == Stability::Marginal);
    CHECK(classify_stability({C{-3, 0}, C{-1, 0}, C{5e-11, 0}}) == Stability::Marginal);
    CHECK(classify_stability({C{-3, 0}, C{-1, 0}, C{2e-10, 0}}) == Stability::Unstable);
}

TEST_CASE("unit-rate system at u = 0.5 is a stable spiral") {
    const auto rep = analyze_equilibrium({}, {1, 1, 0.5});
    CHECK(rep.stability == Stability::StableSpiralMixed);
    CHECK(max_real_part(rep.eigenvalues) == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(rep.residual < 1e-12);
}

TEST_CASE("every admissible parameter set is stable") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto d = oracle::random_draw(rng);
        const auto eigs = eigenvalues(jacobian(d.params, d.control));
        CHECK(max_real_part(eigs) < 0);
    }
}

TEST_CASE("regime thresholds validation") {
    RegimeThresholds t;
    CHECK(validate(t).ok());
    t.tail_fraction = 0;
    CHECK_FALSE(validate(t).ok());
    t.tail_fraction = 0.1;
    t.delta = -1;
    CHECK_FALSE(validate(t).ok());
}

TEST_CASE("classify requires enough samples") {
    IntegratorConfig cfg;
    cfg.T = 0.1;
    cfg.h = 0.01;
    const auto traj = integrate({1, 1, 1}, {}, {1, 1, 0.5}, cfg);
    REQUIRE(traj.size() < kMinRegimeSamples);
    CHECK_THROWS_AS(classify_regime(traj, {}, {1, 1, 0.5}), std::invalid_argument);
}

TEST_CASE("equilibrium regime from interior start") {
    SystemParams p;
    p.r_H = p.r_Q = p.r_M = 0.2;
    const auto label = classify_regime(run({0.5, 0.5, 0.5}, p, {1, 1, 0.5}, 100), p, {1, 1, 0.5});
    CHECK(label.label == Regime::Equilibrium);
    CHECK(label.evidence.converged);
    CHECK(label.evidence.final.H > label.evidence.initial.H);
}

TEST_CASE("degeneration regime at high offloading") {
    const ControlParams c{1, 1, 0.8};
    const auto label = classify_regime(run({1, 1, 1}, {}, c, 100), {}, c);
    CHECK(label.label == Regime::Degeneration);
    CHECK(label.evidence.final.H < 0.9 * label.evidence.initial.H);
    CHECK(label.evidence.final.Q < 0.9 * label.evidence.initial.Q);
}

TEST_CASE("enhancement regime at low offloading over a short horizon") {
    const ControlParams c{1, 10, 0.1};
    const auto label = classify_regime(run({1, 1, 1}, {}, c, 10), {}, c);
    CHECK(label.label == Regime::Enhancement);
    CHECK_FALSE(label.evidence.converged);
    for (double s : label.evidence.tail_slope) CHECK(s > 1e-3);
}

TEST_CASE("trajectory started at the fixed point is Equilibrium") {
    const ControlParams c{1, 1, 0.5};
    const StateVec xs = fixed_point({}, c);
    CHECK(classify_regime(run(xs, {}, c, 20), {}, c).label == Regime::Equilibrium);
}

TEST_CASE("mixed-sign tail is Unclassified") {
    // H rising, M falling and still far from the fixed point.
    const ControlParams c{1, 1, 0.05};
    const auto label = classify_regime(run({0, 0, 50}, {}, c, 2), {}, c);
    CHECK_FALSE(label.evidence.converged);
    CHECK(label.label == Regime::Unclassified);
}

TEST_CASE("labels are reproducible from recorded evidence") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const auto d = oracle::random_draw(rng);
        const auto label = classify_regime(run({1, 1, 1}, d.params, d.control, 5), d.params, d.control);
        CHECK(label_from_evidence(label.evidence) == label.label);
    }
}

TEST_CASE("tail slopes track a robust slope estimate") {
    const ControlParams c{1, 10, 0.1};
    const auto traj = run({1, 1, 1}, {}, c, 10);
    const auto label = classify_regime(traj, {}, c);
    const std::size_t n = traj.size(), w = label.evidence.window;
    std::vector<double> h;
    for (std::size_t i = n - w; i < n; i += 5) h.push_back(traj.states[i].H);
    const double dt = 5 * (traj.times[1] - traj.times[0]);
    const double robust = oracle::theil_sen(h) / dt / (1 + traj.states[n - w / 2].H);
    CHECK(label.evidence.tail_slope[0] == doctest::Approx(robust).epsilon(0.05));
}

TEST_CASE("stability and regime names") {
    CHECK(to_string(Stability::StableSpiralMixed) == "StableSpiralMixed");
    CHECK(to_string(Regime::Degeneration) == "Degeneration");
    CHECK(to_string(Regime::Unclassified) == "Unclassified");
}
