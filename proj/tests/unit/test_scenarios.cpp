#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vanspec/eta.hpp"
#include "vanspec/reconstruct.hpp"
#include "vanspec/scenarios.hpp"
#include "vanspec/spectrum.hpp"

using namespace vanspec;

namespace {

double quad(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}

}  // namespace

TEST_SUITE("scenarios") {
    TEST_CASE("fading density examples") {
        const auto flat = fading_distribution(linear_to_db(1e-6));
        double worst = 0.0;
        for (double z1 = -0.5; z1 < 0.5; z1 += 0.05)
            for (double z2 = -0.5; z2 < 0.5; z2 += 0.05) {
                const double z[2] = {z1, z2};
                worst = std::max(worst, std::abs(flat.density(z) - 1.0));
            }
        CHECK(worst < 1e-5);

        const double a = std::pow(10.0, 0.5);
        const auto f5 = fading_distribution(5.0);
        const double c[2] = {0.0, 0.0}, corner[2] = {0.5 - 1e-15, 0.5 - 1e-15};
        CHECK(f5.density(c) / f5.density(corner) == doctest::Approx(std::exp(a / 2.0)).epsilon(1e-12));
        CHECK(fading_b(a) == doctest::Approx(1.608).epsilon(1e-3));
    }

    TEST_CASE("fading normalization by quadrature") {
        for (double a_db : {0.0, 5.0, 10.0}) {
            const double a = db_to_linear(a_db), b = fading_b(a);
            // The density is separable: (int e^{-a z^2})^2.
            const double one = quad([a](double z) { return std::exp(-a * z * z); }, -0.5, 0.5);
            CHECK(b * one * one == doctest::Approx(1.0).epsilon(1e-8));
        }
    }

    TEST_CASE("fading g_x integrates to one and matches its cdf") {
        for (double a_db : {0.0, 5.0, 10.0}) {
            const auto g = fading_gx(db_to_linear(a_db));
            const double mid = g.breakpoints.front();
            const double total = quad(g.pdf, g.lo, mid) + quad(g.pdf, mid, g.hi);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(g.cdf(g.lo) == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(g.cdf(mid * (1 - 1e-12)) == doctest::Approx(g.cdf(mid)).epsilon(1e-9));
            for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                const double y = g.lo + t * (g.hi - g.lo);
                const double by_pdf = y < mid ? quad(g.pdf, g.lo, y) : quad(g.pdf, g.lo, mid) + quad(g.pdf, mid, y);
                CHECK(g.cdf(y) == doctest::Approx(by_pdf).epsilon(1e-8));
            }
        }
    }

    TEST_CASE("fading g_x matches the measured histogram of density values") {
        const double a = db_to_linear(5.0);
        const auto dist = fading_distribution(5.0);
        const auto g = fading_gx(a);
        const auto measured = empirical_gx(dist, 1000, 60);
        Histogram h{measured.edges, measured.density};
        CHECK(l1_distance(h, DensityOfDensity{g}) <= 0.02);
    }

    TEST_CASE("fading g_x shapes across a") {
        const auto g0 = fading_gx(db_to_linear(0.0));
        const auto g10 = fading_gx(db_to_linear(10.0));
        // Low loss keeps the density values near one.
        CHECK(g0.lo > 0.7);
        CHECK(g0.hi < 1.2);
        // High loss leaves a large area with low density.
        CHECK(g10.cdf(0.5) > 0.35);
        CHECK(g0.cdf(0.5) == 0.0);
    }

    TEST_CASE("fading closed-form I_2 is the second moment of g_x") {
        const auto dist = fading_distribution(5.0);
        const double second = integrate_against_gx(dist.gx, [](double y) { return y * y; });
        CHECK(second == doctest::Approx(dist.power_integral(2)).epsilon(1e-8));
    }

    TEST_CASE("hole distribution") {
        const auto u = hole_distribution(1.0);
        CHECK(u.support_measure == 1.0);
        CHECK(u.id == uniform_distribution(1).id);
        const auto h = hole_distribution(0.8);
        CHECK(h.support_measure == doctest::Approx(0.8));
        const auto& atoms = std::get<DiscreteAtoms>(h.gx).atoms;
        REQUIRE(atoms.size() == 1);
        CHECK(atoms[0].first == doctest::Approx(1.25));
        const auto h2 = hole_distribution(0.5, 2);
        CHECK(h2.dim == 2);
        CHECK_THROWS_AS(hole_distribution(0.0), std::invalid_argument);
        CHECK_THROWS_AS(hole_distribution(1.1), std::invalid_argument);
    }

    TEST_CASE("default collision model") {
        CHECK(default_collision_model(1, 0.7) == 0.0);
        CHECK(default_collision_model(10, 0.0) == 0.0);
        CollisionParams p;
        p.slot_duration = 1.0;
        p.backoff_factor = 1.0;
        p.vulnerability_slots = 1;
        CHECK(default_collision_model(10, 0.05, p) == doctest::Approx(1.0 - std::pow(0.95, 9)));
        CHECK(default_collision_model(10, 0.05, p) == doctest::Approx(0.3698).epsilon(1e-3));
        p.vulnerability_slots = 2;
        CHECK(default_collision_model(10, 0.05, p) == doctest::Approx(1.0 - std::pow(0.95, 18)));
        CHECK_THROWS_AS(default_collision_model(0.5, 0.1), std::invalid_argument);
    }

    TEST_CASE("lossless hierarchy gives the uniform law") {
        auto h = reference_hierarchy(6);
        h.collision = [](double, double) { return 0.0; };
        const auto prof = csma_success_profile(h);
        for (double v : prof.p_normalized) CHECK(v == doctest::Approx(1.0));
        const auto& atoms = std::get<DiscreteAtoms>(prof.distribution.gx).atoms;
        for (const auto& [level, measure] : atoms) CHECK(level == doctest::Approx(1.0));
        CHECK(prof.distribution.support_measure == doctest::Approx(1.0));
    }

    TEST_CASE("csma profile invariants") {
        for (int fig : {6, 7}) {
            const auto h = reference_hierarchy(fig);
            const auto prof = csma_success_profile(h);
            double norm = 0.0;
            for (std::size_t i = 0; i < h.areas.size(); ++i) {
                norm += h.areas[i] * prof.p_normalized[i];
                double worst = 1.0;
                for (double v : prof.p_success_layer[i]) worst = std::min(worst, v);
                CHECK(prof.p_success[i] <= worst + 1e-15);
                for (std::size_t l = 1; l < prof.load[i].size(); ++l)
                    CHECK(prof.load[i][l] == doctest::Approx(h.m[i][l - 1] * prof.load[i][l - 1] *
                                                             (1.0 - prof.p_collision[i][l - 1])));
            }
            CHECK(norm == doctest::Approx(1.0).epsilon(1e-14));
            // Heavier loads succeed less often.
            CHECK(prof.p_success[0] < prof.p_success[3]);
        }
    }

    TEST_CASE("raising a load never lowers a collision probability") {
        const auto base = csma_success_profile(reference_hierarchy(6));
        for (std::size_t i = 0; i < 4; ++i) {
            auto h = reference_hierarchy(6);
            h.lambda1[i] *= 3.0;
            const auto up = csma_success_profile(h);
            for (std::size_t j = 0; j < 4; ++j)
                for (std::size_t l = 0; l < 3; ++l) CHECK(up.p_collision[j][l] >= base.p_collision[j][l]);
        }
    }

    TEST_CASE("heavier reference load widens the success spread") {
        const auto p6 = csma_success_profile(reference_hierarchy(6));
        const auto p7 = csma_success_profile(reference_hierarchy(7));
        auto spread = [](const CsmaProfile& p) {
            const auto [lo, hi] = std::ranges::minmax(p.p_normalized);
            return hi - lo;
        };
        CHECK(spread(p7) > spread(p6));
    }

    TEST_CASE("saturated collision model is rejected") {
        auto h = reference_hierarchy(6);
        h.collision = [](double, double) { return 1.0; };
        CHECK_THROWS_AS(csma_success_profile(h), std::invalid_argument);
    }

    TEST_CASE("hierarchy json") {
        const std::string text = R"({"L": 2, "H": 2, "areas": [0.5, 0.5], "m": [[10, 3], [10, 3]],
            "lambda1": [0.01, 0.001], "collision": {"type": "slotted", "params": {"backoff_factor": 2}}})";
        const auto h = ClusterHierarchy::from_json(text);
        CHECK(h.layers() == 2);
        CollisionParams p;
        p.backoff_factor = 2;
        CHECK(h.collision(10, 0.01) == default_collision_model(10, 0.01, p));
        CHECK_THROWS(ClusterHierarchy::from_json(R"({"L": 3, "areas": [1.0], "m": [[2]], "lambda1": [0.1]})"));
        CHECK_THROWS(ClusterHierarchy::from_json(R"({"areas": [0.4], "m": [[2]], "lambda1": [0.1]})"));
        CHECK_THROWS(ClusterHierarchy::from_json(
            R"({"areas": [1.0], "m": [[2]], "lambda1": [0.1], "collision": {"type": "aloha"}})"));
    }

    TEST_CASE("dense limit objects") {
        const auto u = dense_limit(uniform_distribution(2));
        CHECK(u.mse_floor == 0.0);
        CHECK(std::get<DiscreteAtoms>(u.lsd).atoms.front().first == 1.0);
        const auto h = dense_limit(hole_distribution(0.5));
        CHECK(h.mse_floor == doctest::Approx(0.5));
        CHECK(h.atom_mass == doctest::Approx(0.5));
    }

    TEST_CASE("predicted MSE stays above the coverage floor and approaches it") {
        const auto table = EtaTable::build(1, log_grid(0.004, 1.0, 12), EtaTable::default_gammas(), 50, 4, 12);
        for (double c : {0.5, 0.8}) {
            const auto s = hole_scenario(c, 1);
            for (double beta : {0.01, 0.1, 0.5})
                for (double g_db : {-10.0, 0.0, 10.0, 30.0})
                    CHECK(s.predicted_mse(beta, db_to_linear(g_db), table.function()) > 1.0 - c);
            const double near = s.predicted_mse(0.01, db_to_linear(30.0), table.function());
            CHECK(near < 1.0 - c + 0.02);
        }
    }

    TEST_CASE("fading prediction is one at zero SNR") {
        const auto f = [](double, double) { return 0.5; };
        CHECK(fading_mse(5.0, 0.3, 0.0, f) == 1.0);
        const auto s = fading_scenario(5.0);
        CHECK(s.predicted_mse(0.3, 0.0, f) == 1.0);
        // A constant eta_u makes the mixture constant too.
        CHECK(s.predicted_mse(0.3, 4.0, f) == doctest::Approx(0.5).epsilon(1e-4));
    }
}
