#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "vanspec/eta.hpp"
#include "vanspec/scenarios.hpp"
#include "vanspec/spectrum.hpp"
#include "vanspec/vandermonde.hpp"

using namespace vanspec;

namespace {

const EtaTable& small_table() {
    static const EtaTable t = EtaTable::build(1, log_grid(0.05, 2.0, 10), EtaTable::default_gammas(), 60, 12, 5);
    return t;
}

// Direct eta^{(n)}_u at one (beta, gamma), pooling `trials` spectra.
double direct_eta(int n, double beta, double gamma, int trials, std::uint64_t seed) {
    const int m = static_cast<int>(std::lround(n / beta));
    double acc = 0.0;
    std::size_t count = 0;
    for (int t = 0; t < trials; ++t) {
        for (double v : trial_eigenvalues(uniform_distribution(1), n, m, seed, t)) acc += 1.0 / (gamma * v + 1.0);
        count += n;
    }
    return acc / count;
}

}  // namespace

TEST_SUITE("eta") {
    TEST_CASE("log grid") {
        const auto g = log_grid(1e-2, 1e2, 5);
        REQUIRE(g.size() == 5);
        CHECK(g[0] == 1e-2);
        CHECK(g[2] == doctest::Approx(1.0));
        CHECK(g[4] == 1e2);
        CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), std::invalid_argument);
    }

    TEST_CASE("table nodes") {
        const auto& t = small_table();
        CHECK(std::ranges::is_sorted(t.betas));
        CHECK(t.betas.size() == t.columns.size());
        for (std::size_t i = 0; i < t.betas.size(); ++i) CHECK(t.betas[i] == doctest::Approx(60.0 / t.columns[i]));
        // Duplicate m collapse to one node.
        const auto dup = EtaTable::build(1, {0.5, 0.5001, 1.0}, {0.1, 1.0, 10.0, 100.0}, 20, 2, 1);
        CHECK(dup.betas.size() == 2);
    }

    TEST_CASE("eta is one at zero SNR and decreasing in gamma") {
        const auto& t = small_table();
        for (double beta : {0.05, 0.3, 1.0, 2.0}) {
            CHECK(t(beta, 0.0) == 1.0);
            double prev = 1.0;
            for (double g = 1e-4; g < 1e6; g *= 3.0) {
                const double v = t(beta, g);
                CHECK(v <= prev + 1e-12);
                CHECK(v > 0.0);
                prev = v;
            }
        }
    }

    TEST_CASE("node values reproduce the pooled spectra") {
        const auto& t = small_table();
        const std::size_t node = 3;
        for (std::size_t g = 0; g < t.gammas.size(); g += 40)
            CHECK(t(t.betas[node], t.gammas[g]) == doctest::Approx(t.values[node][g]).epsilon(1e-12));
    }

    TEST_CASE("small beta and large gamma drive eta to zero") {
        const auto t = EtaTable::build(1, {0.01, 0.02, 0.04, 0.08}, EtaTable::default_gammas(), 50, 2, 3);
        CHECK(t(0.01, 1e2 / 0.01) < 0.02);
        CHECK(t(0.01, 1e3 / 0.01) < 0.002);
    }

    TEST_CASE("hold-out node agrees with direct simulation") {
        const auto& t = small_table();
        for (double beta : {0.13, 0.7}) {
            for (double gamma : {1.0, 10.0, 100.0}) {
                const double direct = direct_eta(60, beta, gamma, 40, 77);
                CHECK(t(beta, gamma) == doctest::Approx(direct).epsilon(0.01));
            }
        }
    }

    TEST_CASE("range errors") {
        const auto& t = small_table();
        CHECK_THROWS_AS(t(0.01, 1.0), std::range_error);
        CHECK_THROWS_AS(t(5.0, 1.0), std::range_error);
        CHECK_THROWS_AS(t(0.5, 1e9), std::range_error);
        CHECK_NOTHROW(t(t.betas.front(), 1.0));
        CHECK_NOTHROW(t(t.betas.back(), 1.0));
        CHECK(t.covers(0.1, 1.5));
        CHECK_FALSE(t.covers(0.01, 1.5));
    }

    TEST_CASE("covering table encloses the requested range") {
        const auto t = EtaTable::build_covering(1, 0.123, 1.77, 40, 1, 2, 6);
        CHECK(t.covers(0.123, 1.77));
    }

    TEST_CASE("json round trip") {
        const auto& t = small_table();
        const auto back = EtaTable::from_json(t.to_json());
        CHECK(back.betas == t.betas);
        CHECK(back.columns == t.columns);
        CHECK(back.gammas == t.gammas);
        CHECK(back.values == t.values);
        CHECK(back.seed == t.seed);
        CHECK(back(0.37, 12.5) == t(0.37, 12.5));

        const auto path = std::filesystem::temp_directory_path() / "vanspec_eta_roundtrip.json";
        t.save(path.string());
        CHECK(EtaTable::load(path.string()).values == t.values);
        std::filesystem::remove(path);
        CHECK_THROWS(EtaTable::from_json("{\"kind\": \"other\"}"));
    }

    TEST_CASE("build is independent of execution mode") {
        const auto a = EtaTable::build(1, {0.2, 0.6}, {1.0, 10.0}, 30, 4, 8, Execution::Serial);
        const auto b = EtaTable::build(1, {0.2, 0.6}, {1.0, 10.0}, 30, 4, 8, Execution::Parallel);
        CHECK(a.values == b.values);
    }

    TEST_CASE("mixture collapses for the uniform law") {
        const auto& t = small_table();
        const auto f = t.function();
        const DensityOfDensity delta = DiscreteAtoms{{{1.0, 1.0}}};
        for (double beta : {0.1, 0.8})
            for (double gamma : {0.5, 20.0}) CHECK(eta_mixture(delta, 1.0, beta, gamma, f) == t(beta, gamma));
        CHECK(eta_mixture(delta, 1.0, 0.3, 0.0, f) == 1.0);
    }

    TEST_CASE("discrete mixture is the weighted sum") {
        const auto f = small_table().function();
        const DensityOfDensity g = DiscreteAtoms{{{0.8, 0.25}, {1.2, 0.25}, {0.5, 0.25}, {1.5, 0.25}}};
        const double beta = 0.4, gamma = 7.0;
        double expected = 0.0;
        for (double y : {0.8, 1.2, 0.5, 1.5}) expected += 0.25 * f(beta / y, gamma * y);
        CHECK(eta_mixture(g, 1.0, beta, gamma, f) == doctest::Approx(expected).epsilon(1e-14));
    }

    TEST_CASE("mixture bounds and monotonicity") {
        const auto f = small_table().function();
        const auto hole = scaled_uniform_distribution(0.6, 1);
        const auto fade = fading_distribution(5.0);
        for (double beta : {0.1, 0.3}) {
            double prev_h = 1.0, prev_f = 1.0;
            for (double g = 0.1; g <= 1000.0; g *= 2.0) {
                const double h = asymptotic_mse(hole.gx, hole.support_measure, beta, g, f);
                const double v = asymptotic_mse(fade.gx, 1.0, beta, g, f);
                CHECK(h > 0.4);
                CHECK(h <= 1.0);
                CHECK(h < prev_h);
                CHECK(v > 0.0);
                CHECK(v < prev_f);
                prev_h = h;
                prev_f = v;
            }
        }
    }

    TEST_CASE("hole mixture equals the scaled-law transform") {
        // eta of (1-c) delta + c^2 f_u(c beta, c z) at gamma' = gamma / beta.
        const double c = 0.5, beta = 0.4, gamma = 30.0;
        const auto t = EtaTable::build(1, {c * beta}, EtaTable::default_gammas(), 60, 20, 4);
        const auto base = aesd(uniform_distribution(1), 60, t.columns[0], 20, derive_seed(4, 0));
        const auto moved = transform_scaled_lsd(base, c);
        const auto hole = scaled_uniform_distribution(c, 1);
        const double mix = asymptotic_mse(hole.gx, c, t.betas[0] / c, gamma, t.function());
        CHECK(mix == doctest::Approx(empirical_eta(moved, gamma / (t.betas[0] / c))).epsilon(1e-6));
    }

    TEST_CASE("mixture beta range") {
        const auto fade = fading_distribution(5.0);
        const auto [lo, hi] = mixture_beta_range(fade.gx, 0.2, 0.8);
        const auto [ylo, yhi] = gx_support(fade.gx);
        CHECK(lo == doctest::Approx(0.2 / yhi));
        CHECK(hi == doctest::Approx(0.8 / ylo));
    }
}
