#pragma once

#include <string>
#include <vector>

#include "vanspec/partitions.hpp"
#include "vanspec/sampling.hpp"

namespace vanspec {

enum class IntegralMethod { ClosedForm, Quadrature, MonteCarlo };

std::string to_string(IntegralMethod m);

/// I_k = int_H f(z)^k dz for k = 1..P.
struct DensityPowerIntegrals {
    std::vector<double> values;
    std::vector<double> std_err;  // zero unless method == MonteCarlo
    IntegralMethod method = IntegralMethod::ClosedForm;

    double operator[](int k) const { return values.at(k - 1); }
    int size() const { return static_cast<int>(values.size()); }
};

/// Uses the distribution's closed form when present; otherwise nested adaptive
/// Gauss-Kronrod for d <= 2 and antithetic Monte Carlo (`mc_samples` pairs) for d >= 3.
DensityPowerIntegrals density_power_integrals(const SamplingDistribution& dist, int max_k,
                                              std::uint64_t seed = 1, long mc_samples = 200000);

/// Forces quadrature for d <= 2 regardless of any closed form.
DensityPowerIntegrals density_power_integrals_quadrature(const SamplingDistribution& dist, int max_k);

/// Unit I_k, the uniform-phase case.
DensityPowerIntegrals unit_power_integrals(int max_k);

/// M_{p,d,beta,x} = sum_k beta^{p-k} I_k sum_{w in Omega_{p,k}} v(w)^d.
double asymptotic_moment(int p, int d, double beta, const DensityPowerIntegrals& I);

/// Coefficients c_k = sum_{w in Omega_{p,k}} v(w)^d, so that M_p = sum_k beta^{p-k} I_k c_k.
std::vector<double> moment_block_sums(int p, int d);

struct MomentTable {
    int d = 1;
    double beta = 1.0;
    std::vector<double> moments;  // M_1..M_P
    std::string distribution_id;
    IntegralMethod method = IntegralMethod::ClosedForm;

    /// Hankel matrix [M_{i+j}] (M_0 = 1) is positive semidefinite.
    bool hankel_psd(double tol = 1e-9) const;
};

MomentTable moment_table(const SamplingDistribution& dist, int d, double beta, int max_p);

}  // namespace vanspec
