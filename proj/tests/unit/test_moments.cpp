#include <doctest.h>

#include "vanspec/moments.hpp"
#include "vanspec/scenarios.hpp"
#include "vanspec/spectrum.hpp"
#include "vanspec/vandermonde.hpp"

using namespace vanspec;

TEST_SUITE("moments") {
    TEST_CASE("density power integrals") {
        const auto u = density_power_integrals(uniform_distribution(1), 4);
        CHECK(u.values == std::vector<double>{1, 1, 1, 1});
        CHECK(u.method == IntegralMethod::ClosedForm);

        const auto h = density_power_integrals(scaled_uniform_distribution(0.5, 1), 3);
        CHECK(h[1] == doctest::Approx(1.0));
        CHECK(h[2] == doctest::Approx(2.0));
        CHECK(h[3] == doctest::Approx(4.0));
    }

    TEST_CASE("fading I_2 closed form against quadrature") {
        const double a = db_to_linear(5.0), b = fading_b(a);
        const double e = std::erf(std::sqrt(a / 2.0));
        const double expected = b * b * std::numbers::pi / (2.0 * a) * e * e;
        const auto dist = fading_distribution(5.0);
        const auto closed = density_power_integrals(dist, 4);
        const auto quad = density_power_integrals_quadrature(dist, 4);
        CHECK(quad.method == IntegralMethod::Quadrature);
        CHECK(closed[2] == doctest::Approx(expected).epsilon(1e-12));
        for (int k = 1; k <= 4; ++k) CHECK(quad[k] == doctest::Approx(closed[k]).epsilon(1e-6));
    }

    TEST_CASE("I_k is log-convex in k and I_1 = 1") {
        for (const auto& dist : {fading_distribution(0.0), fading_distribution(5.0), fading_distribution(10.0),
                                 scaled_uniform_distribution(0.3, 2)}) {
            const auto I = density_power_integrals(dist, 6);
            CHECK(I[1] == doctest::Approx(1.0).epsilon(1e-12));
            for (int k = 2; k < 6; ++k) CHECK(I[k] * I[k] <= I[k - 1] * I[k + 1] * (1 + 1e-12));
        }
    }

    TEST_CASE("Monte Carlo integrals in three dimensions") {
        SamplingDistribution dist = scaled_uniform_distribution(0.5, 3);
        dist.power_integral = nullptr;  // force the sampling route
        const auto I = density_power_integrals(dist, 3, 7, 200000);
        CHECK(I.method == IntegralMethod::MonteCarlo);
        for (int k = 1; k <= 3; ++k) {
            const double exact = std::pow(0.5, 1 - k);
            CHECK(std::abs(I[k] - exact) <= 4.0 * I.std_err[k - 1] + 1e-12);
            CHECK(std::abs(I[k] / exact - 1.0) < 1e-2);
        }
    }

    TEST_CASE("non-integrable powers are rejected") {
        SamplingDistribution dist = uniform_distribution(1);
        dist.power_integral = [](int k) { return k == 3 ? INFINITY : 1.0; };
        CHECK_THROWS_AS(density_power_integrals(dist, 4), std::domain_error);
    }

    TEST_CASE("asymptotic moment examples") {
        const auto I = unit_power_integrals(4);
        for (int d : {1, 2, 3})
            for (double beta : {0.1, 1.0, 3.0}) CHECK(asymptotic_moment(1, d, beta, I) == doctest::Approx(1.0));
        CHECK(asymptotic_moment(2, 1, 1.0, I) == doctest::Approx(2.0));
        CHECK(asymptotic_moment(4, 1, 1.0, I) == doctest::Approx(44.0 / 3.0).epsilon(1e-14));
        CHECK(asymptotic_moment(4, 2, 1.0, I) == doctest::Approx(14.0 + 4.0 / 9.0).epsilon(1e-14));
        CHECK_THROWS_AS(asymptotic_moment(5, 1, 1.0, I), std::invalid_argument);
        CHECK_THROWS_AS(asymptotic_moment(8, 1, 1.0, unit_power_integrals(8)), std::invalid_argument);
    }

    TEST_CASE("moment table examples") {
        const auto t = moment_table(uniform_distribution(1), 1, 0.5, 3);
        REQUIRE(t.moments.size() == 3);
        CHECK(t.moments[0] == doctest::Approx(1.0));
        CHECK(t.moments[1] == doctest::Approx(1.5));
        CHECK(t.moments[2] == doctest::Approx(2.75));
        CHECK(t.distribution_id == "uniform-d1");

        const auto t2 = moment_table(uniform_distribution(2), 2, 1.0, 4);
        CHECK(t2.moments[3] == doctest::Approx(14.0 + 4.0 / 9.0));

        const auto th = moment_table(scaled_uniform_distribution(0.5, 1), 1, 1.0, 2);
        CHECK(th.moments[1] == doctest::Approx(3.0));

        CHECK_THROWS_AS(moment_table(uniform_distribution(1), 2, 1.0, 3), std::invalid_argument);
    }

    TEST_CASE("moment tables are valid moment sequences") {
        for (double beta : {0.1, 0.5, 1.0, 2.0}) {
            const auto t = moment_table(fading_distribution(5.0), 2, beta, 7);
            CHECK(t.hankel_psd());
            for (double m : t.moments) CHECK(m > 0.0);
        }
    }

    TEST_CASE("M_p is a degree p-1 polynomial in beta with positive coefficients") {
        for (int p = 1; p <= kMaxPartitionSize; ++p)
            for (int d : {1, 2, 3}) {
                const auto c = moment_block_sums(p, d);
                for (double v : c) CHECK(v > 0.0);
                // Leading coefficient beta^{p-1} comes from the single one-block partition.
                CHECK(c[0] == doctest::Approx(1.0));
                // beta^0 comes from the all-singleton partition.
                CHECK(c[p - 1] == doctest::Approx(1.0));
            }
        // p-th finite difference of a degree p-1 polynomial vanishes.
        const auto I = unit_power_integrals(5);
        const int p = 5;
        double diff = 0.0;
        for (int j = 0; j <= p; ++j) {
            double binom = 1.0;
            for (int i = 0; i < j; ++i) binom = binom * (p - i) / (i + 1);
            diff += ((p - j) % 2 ? -1.0 : 1.0) * binom * asymptotic_moment(p, 1, 0.5 + 0.25 * j, I);
        }
        CHECK(std::abs(diff) < 1e-9);
    }

    TEST_CASE("moments grow with d only through crossing partitions") {
        const auto I = unit_power_integrals(3);
        for (int p = 1; p <= 3; ++p)
            CHECK(asymptotic_moment(p, 1, 0.7, I) == doctest::Approx(asymptotic_moment(p, 3, 0.7, I)));
        const auto I4 = unit_power_integrals(4);
        CHECK(asymptotic_moment(4, 2, 0.7, I4) < asymptotic_moment(4, 1, 0.7, I4));
    }

    TEST_CASE("scaled support moments match the scaling law") {
        // Analytically M_p(c, beta) = c^{1-p} M_p(u, c beta).
        const double c = 0.6;
        const auto Ih = density_power_integrals(scaled_uniform_distribution(c, 1), 5);
        const auto Iu = unit_power_integrals(5);
        for (double beta : {0.2, 0.8})
            for (int p = 1; p <= 5; ++p)
                CHECK(asymptotic_moment(p, 1, beta, Ih) ==
                      doctest::Approx(std::pow(c, 1 - p) * asymptotic_moment(p, 1, c * beta, Iu)).epsilon(1e-12));
    }

    TEST_CASE("scaled support moments match transformed histogram moments") {
        const double c = 0.5, beta = 0.5;
        const int n = 100;
        const int m_base = static_cast<int>(std::lround(n / (c * beta)));
        const auto base = aesd(uniform_distribution(1), n, m_base, 20, 11);
        const auto moved = transform_scaled_lsd(base, c);
        const auto I = density_power_integrals(scaled_uniform_distribution(c, 1), 4);
        for (int p = 1; p <= 4; ++p)
            CHECK(moved.moment(p) == doctest::Approx(asymptotic_moment(p, 1, beta, I)).epsilon(0.05));
    }

    TEST_CASE("analytic moments match the trace oracle at moderate size") {
        const int n = 128;
        for (double beta : {0.5, 1.0}) {
            const int m = static_cast<int>(std::lround(n / beta));
            const auto mc = empirical_trace_moments(uniform_distribution(1), n, m, 30, 3, 4);
            const auto I = unit_power_integrals(4);
            for (int p = 1; p <= 4; ++p)
                CHECK(mc.mean[p - 1] == doctest::Approx(asymptotic_moment(p, 1, beta, I)).epsilon(0.05));
        }
    }
}
