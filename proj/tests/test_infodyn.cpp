#include <doctest.h>

#include <cmath>
#include <random>

#include "edl/infodyn.hpp"
#include "oracles.hpp"

using namespace edl;
using namespace edl::info;

namespace {

std::vector<double> vec(const Dist& d) { return {d.probs().begin(), d.probs().end()}; }

std::vector<std::vector<double>> nested(const Joint& j) {
    std::vector<std::vector<double>> out(j.K, std::vector<double>(j.K));
    for (std::size_t x = 0; x < j.K; ++x)
        for (std::size_t y = 0; y < j.K; ++y) out[x][y] = j(x, y);
    return out;
}

Dist random_dist(std::mt19937_64& rng, std::size_t K) {
    std::exponential_distribution<double> E(1.0);
    std::vector<double> w(K);
    for (double& v : w) v = E(rng);
    return Dist::normalized(w);
}

}  // namespace

TEST_CASE("distribution construction") {
    CHECK_NOTHROW(Dist({0.5, 0.5}));
    CHECK_THROWS(Dist({0.5, 0.6}));
    CHECK_THROWS(Dist({1.2, -0.2}));
    CHECK_THROWS(Dist({1.0}));
    CHECK(Dist::uniform(4)[2] == 0.25);
    CHECK(Dist::point_mass(3, 1).argmax() == 1);
    const Dist z = Dist::zipf(4, 1.0);
    CHECK(z[0] == doctest::Approx(1.0 / (1 + 0.5 + 1.0 / 3 + 0.25)));
    CHECK(z[0] / z[3] == doctest::Approx(4.0));
}

TEST_CASE("entropy values") {
    CHECK(shannon_entropy(Dist::uniform(4)) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(shannon_entropy(Dist::point_mass(5, 2)) == 0.0);
    // Brute-force reference: 1.5 ln 2 = 1.0397207708399180.
    CHECK(shannon_entropy(Dist({0.5, 0.25, 0.25})) == doctest::Approx(1.0397207708399180).epsilon(1e-14));
}

TEST_CASE("entropy is maximal at uniform") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t K = 2 + trial % 30;
        const Dist d = random_dist(rng, K);
        const double h = shannon_entropy(d);
        CHECK(h >= 0);
        CHECK(h <= std::log(static_cast<double>(K)) + 1e-12);
        CHECK(h == doctest::Approx(oracle::entropy(vec(d))).epsilon(1e-12));
    }
}

TEST_CASE("KL values") {
    CHECK(kl_divergence(Dist({0.9, 0.1}), Dist({0.5, 0.5})) == doctest::Approx(0.36806420716849707).epsilon(1e-10));
    CHECK(kl_divergence(Dist({0.5, 0.5}), Dist({0.9, 0.1})) == doctest::Approx(0.51082562376599068).epsilon(1e-10));
    CHECK(kl_divergence(Dist({1.0, 0.0}), Dist({0.5, 0.5})) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    const Dist p({0.3, 0.7});
    CHECK(std::abs(kl_divergence(p, p)) < 1e-11);
}

TEST_CASE("KL is finite against a zero cell and matches the oracle") {
    const double kl = kl_divergence(Dist({0.5, 0.5}), Dist({1.0, 0.0}));
    CHECK(std::isfinite(kl));
    CHECK(kl > 10);

    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const Dist p = random_dist(rng, 16), q = random_dist(rng, 16);
        const double ours = kl_divergence(p, q);
        CHECK(ours >= -1e-15);
        CHECK(ours == doctest::Approx(oracle::kl(vec(p), vec(q))).epsilon(1e-9));
    }
}

TEST_CASE("mutual information of the copy channel") {
    // Uniform K = 4 through the kappa = 0.5 channel: 0.31275151471136742.
    const Joint j = copy_channel_joint(Dist::uniform(4), Dist::uniform(4), 0.5);
    CHECK(mutual_information(j) == doctest::Approx(0.31275151471136742).epsilon(1e-12));
    CHECK(consecutive_mi(Dist({0.7, 0.3}), Dist({0.6, 0.4}), InfoConfig{.u = 0.9, .kappa = 0.5}) ==
          doctest::Approx(0.11390565194143290).epsilon(1e-12));
}

TEST_CASE("mutual information bounds and independence") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t K = 2 + trial % 12;
        const Dist a = random_dist(rng, K), b = random_dist(rng, K);
        const double kappa = std::uniform_real_distribution<double>(0, 1)(rng);
        const Joint j = copy_channel_joint(a, b, kappa);
        const double mi = mutual_information(j);
        CHECK(mi >= -1e-12);
        CHECK(mi <= shannon_entropy(a) + 1e-12);
        CHECK(mi == doctest::Approx(oracle::mutual_information(nested(j))).epsilon(1e-9).scale(1e-12));
        CHECK(std::abs(mutual_information(copy_channel_joint(a, b, 0.0))) < 1e-12);
    }
    // Full copy of a uniform source carries its whole entropy.
    CHECK(mutual_information(copy_channel_joint(Dist::uniform(8), Dist::uniform(8), 1.0)) ==
          doctest::Approx(std::log(8.0)).epsilon(1e-12));
}

TEST_CASE("sharpening") {
    const Dist d({0.6, 0.3, 0.1});
    for (std::size_t i = 0; i < 3; ++i) CHECK(sharpen(d, 1.0)[i] == doctest::Approx(d[i]).epsilon(1e-15));
    const Dist s = sharpen(d, 0.5);
    CHECK(s[0] == doctest::Approx(0.36 / 0.46).epsilon(1e-14));
    CHECK(shannon_entropy(s) < shannon_entropy(d));
    CHECK(sharpen(Dist::uniform(5), 0.2)[3] == doctest::Approx(0.2).epsilon(1e-14));
    // Tiny masses at low temperature underflow cleanly.
    const Dist extreme = sharpen(Dist({1 - 1e-200, 1e-200}), 0.01);
    CHECK(extreme[0] == 1.0);
}

TEST_CASE("tail truncation") {
    const Dist d({0.5, 0.49995, 0.00005});
    const Dist t = truncate_tail(d, 1e-4);
    CHECK(t[2] == 0.0);
    CHECK(t[0] + t[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(tail_support(t, 1e-4) == 2);
    CHECK(truncate_tail(d, 0.0) == d);
    CHECK_THROWS_AS(truncate_tail(Dist::uniform(4), 0.5), NumericalError);
}

TEST_CASE("config validation") {
    CHECK(validate(InfoConfig{}).ok());
    CHECK(InfoConfig{}.tau_value() == doctest::Approx(0.28));
    CHECK_FALSE(validate(InfoConfig{.u = 1.5}).ok());
    CHECK_FALSE(validate(InfoConfig{.u = 0.9, .tau = 0.0}).ok());
    CHECK_FALSE(validate(InfoConfig{.u = 0.9, .kappa = 2}).ok());
}

TEST_CASE("u = 0 leaves the human distribution at the world") {
    const InfoConfig cfg{.u = 0.0, .lambda = 0.0};
    auto st = initial_state(16, 1.0);
    for (int g = 0; g < 5; ++g) {
        st = step_generation(st, cfg);
        for (std::size_t i = 0; i < 16; ++i) CHECK(st.human[i] == doctest::Approx(st.world[i]).epsilon(1e-14));
    }
    CHECK(st.generation == 5);
}

TEST_CASE("degenerative loop: entropy contraction and divergence shift") {
    const InfoConfig cfg{.u = 0.9, .lambda = 0.9};
    const auto series = run_generations(initial_state(64, 1.0), cfg, 20);
    REQUIRE(series.size() == 20);
    CHECK(series.front().generation == 1);
    CHECK(series.back().generation == 20);
    // Frozen from an independent prototype of the same update.
    CHECK(series[0].entropy_human == doctest::Approx(0.89874461855576615).epsilon(1e-9));
    CHECK(series[0].kl_model_human == doctest::Approx(0.9460285535587406).epsilon(1e-9));
    CHECK(series[0].mi_consecutive == doctest::Approx(1.3761230019627582).epsilon(1e-9));
    CHECK(series[19].entropy_human == doctest::Approx(0.56178).epsilon(1e-4));
    for (std::size_t g = 1; g < series.size(); ++g) {
        CHECK(series[g].entropy_human <= series[g - 1].entropy_human + 1e-12);
        CHECK(series[g].kl_model_world >= series[g - 1].kl_model_world - 1e-12);
        CHECK(series[g].tail_support <= series[g - 1].tail_support);
        if (g >= 2) CHECK(series[g].mi_consecutive <= series[g - 1].mi_consecutive + 1e-12);
    }
    CHECK(series.back().kl_model_human < series.front().kl_model_human);
}

TEST_CASE("generation loop is deterministic and validates its inputs") {
    const InfoConfig cfg{};
    CHECK(run_generations(initial_state(), cfg, 5) == run_generations(initial_state(), cfg, 5));
    CHECK_THROWS(run_generations(initial_state(), cfg, 1));
    CHECK_THROWS(run_generations(initial_state(), InfoConfig{.u = 2}, 5));
}
