#include "vanspec/moments.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace vanspec {

std::string to_string(IntegralMethod m) {
    switch (m) {
        case IntegralMethod::ClosedForm: return "closed-form";
        case IntegralMethod::Quadrature: return "quadrature";
        case IntegralMethod::MonteCarlo: return "monte-carlo";
    }
    return "?";
}

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr double kQuadTol = 1e-10;

void check_finite(double v, int k, const std::string& id) {
    if (!std::isfinite(v) || v <= 0.0)
        throw std::domain_error("I_" + std::to_string(k) + " of '" + id + "' is not a finite positive number (got " +
                                std::to_string(v) + "); f^" + std::to_string(k) + " is not integrable");
}

double quadrature_power(const SamplingDistribution& dist, int k) {
    if (dist.dim == 1) {
        auto f = [&](double z) { return std::pow(dist.density(std::span<const double>(&z, 1)), k); };
        return GK::integrate(f, -0.5, 0.5, 20, kQuadTol);
    }
    auto outer = [&](double z1) {
        auto inner = [&](double z2) {
            const double z[2] = {z1, z2};
            return std::pow(dist.density(z), k);
        };
        return GK::integrate(inner, -0.5, 0.5, 20, kQuadTol);
    };
    return GK::integrate(outer, -0.5, 0.5, 20, kQuadTol);
}

}  // namespace

DensityPowerIntegrals density_power_integrals_quadrature(const SamplingDistribution& dist, int max_k) {
    if (dist.dim > 2) throw std::invalid_argument("quadrature of I_k is limited to d <= 2");
    DensityPowerIntegrals out;
    out.method = IntegralMethod::Quadrature;
    for (int k = 1; k <= max_k; ++k) {
        const double v = quadrature_power(dist, k);
        check_finite(v, k, dist.id);
        out.values.push_back(v);
        out.std_err.push_back(0.0);
    }
    return out;
}

DensityPowerIntegrals density_power_integrals(const SamplingDistribution& dist, int max_k, std::uint64_t seed,
                                              long mc_samples) {
    if (max_k < 1) throw std::invalid_argument("need at least I_1");
    if (dist.power_integral) {
        DensityPowerIntegrals out;
        for (int k = 1; k <= max_k; ++k) {
            const double v = dist.power_integral(k);
            check_finite(v, k, dist.id);
            out.values.push_back(v);
            out.std_err.push_back(0.0);
        }
        return out;
    }
    if (dist.dim <= 2) return density_power_integrals_quadrature(dist, max_k);

    DensityPowerIntegrals out;
    out.method = IntegralMethod::MonteCarlo;
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<double> sum(max_k, 0.0), sum2(max_k, 0.0);
    std::vector<double> z(dist.dim), zr(dist.dim);
    for (long s = 0; s < mc_samples; ++s) {
        for (int j = 0; j < dist.dim; ++j) {
            z[j] = u(rng);
            zr[j] = -z[j];
        }
        const double f1 = dist.density(z), f2 = dist.density(zr);
        for (int k = 1; k <= max_k; ++k) {
            const double pair = 0.5 * (std::pow(f1, k) + std::pow(f2, k));
            sum[k - 1] += pair;
            sum2[k - 1] += pair * pair;
        }
    }
    for (int k = 1; k <= max_k; ++k) {
        const double mean = sum[k - 1] / mc_samples;
        const double var = std::max(0.0, sum2[k - 1] / mc_samples - mean * mean);
        check_finite(mean, k, dist.id);
        out.values.push_back(mean);
        out.std_err.push_back(std::sqrt(var / mc_samples));
    }
    return out;
}

DensityPowerIntegrals unit_power_integrals(int max_k) {
    DensityPowerIntegrals out;
    out.values.assign(max_k, 1.0);
    out.std_err.assign(max_k, 0.0);
    return out;
}

std::vector<double> moment_block_sums(int p, int d) {
    std::vector<double> c(p, 0.0);
    for (const auto& coef : cached_coefficients(p)) c[coef.partition.blocks() - 1] += std::pow(coef.value, d);
    return c;
}

double asymptotic_moment(int p, int d, double beta, const DensityPowerIntegrals& I) {
    if (p < 1 || p > kMaxPartitionSize) throw std::invalid_argument("moment order outside [1, " + std::to_string(kMaxPartitionSize) + "]");
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
    if (I.size() < p) throw std::invalid_argument("missing I_k: have " + std::to_string(I.size()) + ", need " + std::to_string(p));
    const auto c = moment_block_sums(p, d);
    double m = 0.0;
    for (int k = 1; k <= p; ++k) m += std::pow(beta, p - k) * I[k] * c[k - 1];
    return m;
}

bool MomentTable::hankel_psd(double tol) const {
    const int h = static_cast<int>(moments.size()) / 2;
    Eigen::MatrixXd H(h + 1, h + 1);
    for (int i = 0; i <= h; ++i)
        for (int j = 0; j <= h; ++j) H(i, j) = (i + j == 0) ? 1.0 : moments[i + j - 1];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol * std::max(1.0, es.eigenvalues().maxCoeff());
}

MomentTable moment_table(const SamplingDistribution& dist, int d, double beta, int max_p) {
    if (dist.dim != d)
        throw std::invalid_argument("distribution '" + dist.id + "' has dimension " + std::to_string(dist.dim) +
                                    ", requested d = " + std::to_string(d));
    const auto I = density_power_integrals(dist, max_p);
    MomentTable t;
    t.d = d;
    t.beta = beta;
    t.distribution_id = dist.id;
    t.method = I.method;
    for (int p = 1; p <= max_p; ++p) t.moments.push_back(asymptotic_moment(p, d, beta, I));
    return t;
}

}  // namespace vanspec
