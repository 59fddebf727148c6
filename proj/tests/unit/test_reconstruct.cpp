#include <doctest.h>

#include <complex>
#include <numbers>

#include "vanspec/reconstruct.hpp"
#include "vanspec/scenarios.hpp"
#include "vanspec/spectrum.hpp"

using namespace vanspec;
using cd = std::complex<double>;

TEST_SUITE("reconstruct") {
    TEST_CASE("spectrum power and covariance") {
        Rng rng(3);
        const int draws = 10000;
        Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(4, 4);
        double power = 0.0;
        for (int i = 0; i < draws; ++i) {
            const auto s = generate_spectrum(2, 2, 1.0, rng);
            power += s.a.squaredNorm() / 4.0;
            cov += s.a * s.a.adjoint();
        }
        cov /= draws;
        CHECK(power / draws == doctest::Approx(1.0).epsilon(0.02));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j) CHECK(std::abs(cov(i, j)) < 4.0 / std::sqrt(draws));
    }

    TEST_CASE("spectrum determinism and errors") {
        CHECK(generate_spectrum(5, 1, 2.0, 9).a == generate_spectrum(5, 1, 2.0, 9).a);
        CHECK_THROWS_AS(generate_spectrum(5, 1, 0.0, 9), std::invalid_argument);
    }

    TEST_CASE("field synthesis examples") {
        FieldSpectrum dc{Eigen::VectorXcd::Zero(9), 1.0, 3, 2};
        dc.a[0] = 1.0;
        const double x[2] = {0.31, -0.2};
        CHECK(std::abs(synthesize_field(dc, x) - cd(1.0 / 3.0, 0.0)) < 1e-15);

        FieldSpectrum one{Eigen::VectorXcd::Zero(2), 1.0, 2, 1};
        one.a[1] = 1.0;
        const double q = 0.25;
        CHECK(std::abs(synthesize_field(one, std::span<const double>(&q, 1)) - cd(0.0, 1.0 / std::sqrt(2.0))) < 1e-15);
    }

    TEST_CASE("sampled field equals beta^-1/2 V^H a") {
        const auto V = build_vandermonde(fading_distribution(5.0), 2, 4, 11, 21);
        const auto spec = generate_spectrum(4, 2, 1.0, 22);
        const Eigen::VectorXcd s = V.entries.adjoint() * spec.a / std::sqrt(V.beta());
        for (int q = 0; q < V.m(); ++q) {
            const double x[2] = {V.points(0, q), V.points(1, q)};
            CHECK(std::abs(synthesize_field(spec, x) - s[q]) < 1e-12);
        }
    }

    TEST_CASE("observation examples") {
        const auto V = build_vandermonde(uniform_distribution(1), 1, 6, 8, 2);
        const auto spec = generate_spectrum(6, 1, 1.0, 3);
        const auto clean = observe(V, spec, 0.0, 4);
        CHECK(clean.p == clean.s);

        FieldSpectrum zero{Eigen::VectorXcd::Zero(6), 1.0, 6, 1};
        const auto V2 = build_vandermonde(uniform_distribution(1), 1, 6, 20000, 2);
        const auto noise = observe(V2, zero, 0.3, 5);
        CHECK(noise.p.squaredNorm() / 20000.0 == doctest::Approx(0.3).epsilon(0.03));

        Eigen::MatrixXd x0(1, 1);
        x0 << 0.0;
        FieldSpectrum ones{Eigen::VectorXcd::Ones(2), 1.0, 2, 1};
        const auto p = observe(vandermonde_from_points(2, x0), ones, 0.0, 1).p;
        CHECK(std::abs(p[0] - cd(std::sqrt(2.0), 0.0)) < 1e-15);
    }

    TEST_CASE("noise residual has the requested variance") {
        const auto V = build_vandermonde(uniform_distribution(2), 2, 3, 20000, 6);
        const auto spec = generate_spectrum(3, 2, 1.0, 7);
        const auto obs = observe(V, spec, 0.05, 8);
        CHECK((obs.p - obs.s).squaredNorm() / 20000.0 == doctest::Approx(0.05).epsilon(0.03));
    }

    TEST_CASE("trace MSE equals eta of the realized spectrum") {
        Rng rng(101);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int rep = 0; rep < 25; ++rep) {
            const int d = 1 + rep % 2;
            const int n = d == 1 ? 4 + rep % 13 : 2 + rep % 5;
            const int rows = row_count(n, d);
            const double beta = 0.1 * std::pow(20.0, u(rng));
            const int m = std::max(1, static_cast<int>(std::lround(rows / beta)));
            const double gamma = 0.1 * std::pow(1000.0, u(rng));
            const auto V = build_vandermonde(uniform_distribution(d), d, n, m, rng);
            const double direct = trace_mse(V, gamma);
            const double eta = empirical_eta(gram_eigenvalues(V), gamma / V.beta());
            CHECK(std::abs(direct - eta) < 1e-10);
        }
        // The 4 x 8 instance.
        const auto V = build_vandermonde(uniform_distribution(1), 1, 4, 8, 5);
        CHECK(std::abs(trace_mse(V, 3.0) - empirical_eta(gram_eigenvalues(V), 3.0 / V.beta())) < 1e-10);
    }

    TEST_CASE("primal and dual forms agree") {
        for (int m : {5, 30}) {
            const auto V = build_vandermonde(uniform_distribution(2), 2, 4, m, 10 + m);
            const auto spec = generate_spectrum(4, 2, 1.5, 11);
            const auto obs = observe(V, spec, 0.2, 12);
            const auto p = lmmse(V, obs, &spec, LmmseForm::Primal);
            const auto d = lmmse(V, obs, &spec, LmmseForm::Dual);
            CHECK_FALSE(p.dual_form);
            CHECK(d.dual_form);
            CHECK((p.a_hat - d.a_hat).norm() < 1e-9 * std::max(1.0, p.a_hat.norm()));
            CHECK(lmmse(V, obs, &spec).dual_form == (m < 16));
            CHECK(p.trace_mse > 0.0);
            CHECK(p.trace_mse < 1.0);
        }
    }

    TEST_CASE("limits in gamma") {
        const auto V = build_vandermonde(uniform_distribution(1), 1, 1, 10, 1);
        const auto spec = generate_spectrum(1, 1, 1.0, 2);
        const auto sharp = lmmse(V, observe(V, spec, 1e-12, 3), &spec);
        CHECK(sharp.normalized_error < 1e-10);
        CHECK(sharp.trace_mse < 1e-10);

        const auto V2 = build_vandermonde(uniform_distribution(1), 1, 6, 10, 1);
        const auto spec2 = generate_spectrum(6, 1, 1.0, 2);
        const auto blind = lmmse(V2, observe(V2, spec2, 1e12, 3), &spec2);
        CHECK(blind.a_hat.norm() < 1e-4);
        CHECK(blind.trace_mse == doctest::Approx(1.0).epsilon(1e-9));

        Observation none = observe(V2, spec2, 0.0, 3);
        CHECK_THROWS_AS(lmmse(V2, none), std::invalid_argument);
    }

    TEST_CASE("ill conditioning is flagged, not fatal") {
        Eigen::MatrixXd pts(1, 3);
        pts << 0.1, 0.1, 0.1;  // rank one
        const auto V = vandermonde_from_points(3, pts);
        const auto spec = generate_spectrum(3, 1, 1.0, 4);
        const auto r = lmmse(V, observe(V, spec, 1e-14, 5), &spec, LmmseForm::Primal);
        CHECK(r.ill_conditioned);
        CHECK(std::isfinite(r.a_hat.norm()));
    }

    TEST_CASE("Monte Carlo estimators agree") {
        const auto est = mse_monte_carlo(uniform_distribution(2), 5, 60, {0.0, 1.0, 10.0, 100.0}, 200, 17);
        for (const auto& e : est) {
            const double se = std::sqrt(e.se_error * e.se_error + e.se_trace * e.se_trace);
            CHECK(std::abs(e.mean_error - e.mean_trace) <= 3.0 * se + 1e-12);
        }
        CHECK(est[0].mean_trace == 1.0);
        for (std::size_t i = 1; i < est.size(); ++i) {
            CHECK(est[i].mean_trace < est[i - 1].mean_trace);
            CHECK(est[i].mean_trace > 0.0);
        }
    }

    TEST_CASE("Monte Carlo is independent of execution mode") {
        const auto a = mse_monte_carlo(fading_distribution(5.0), 4, 30, {1.0, 10.0}, 16, 5, Execution::Serial);
        const auto b = mse_monte_carlo(fading_distribution(5.0), 4, 30, {1.0, 10.0}, 16, 5, Execution::Parallel);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].mean_trace == b[i].mean_trace);
            CHECK(a[i].mean_error == b[i].mean_error);
            CHECK(a[i].se_error == b[i].se_error);
        }
        const auto single = mse_monte_carlo(fading_distribution(5.0), 4, 30, 10.0, 16, 5);
        CHECK(single.mean_error == a[1].mean_error);
    }
}
