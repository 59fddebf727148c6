#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vanspec/parallel.hpp"
#include "vanspec/sampling.hpp"
#include "vanspec/vandermonde.hpp"

namespace vanspec {

/// Reciprocal condition estimates below 1 / kCondTol flag a result as ill-conditioned.
inline constexpr double kCondTol = 1e12;

struct FieldSpectrum {
    Eigen::VectorXcd a;  // length n^d, indexed by nu(l)
    double sigma_a2 = 1.0;
    int n = 0;
    int d = 0;
};

struct Observation {
    Eigen::VectorXcd p;  // received samples
    Eigen::VectorXcd s;  // noiseless samples
    double sigma_a2 = 1.0;
    double sigma_n2 = 0.0;
    double gamma() const { return sigma_a2 / sigma_n2; }
};

struct LmmseResult {
    Eigen::VectorXcd a_hat;
    double normalized_error = 0.0;  // |a - a_hat|^2 / (n^d sigma_a2)
    double trace_mse = 0.0;         // tr_norm (gamma/beta V V^H + I)^{-1}
    bool ill_conditioned = false;
    bool dual_form = false;
};

/// I.i.d. circularly symmetric complex Gaussian coefficients of variance sigma_a2.
FieldSpectrum generate_spectrum(int n, int d, double sigma_a2, Rng& rng);
FieldSpectrum generate_spectrum(int n, int d, double sigma_a2, std::uint64_t seed);

/// n^{-d/2} sum_l a_{nu(l)} e^{+j 2 pi l.x}.
std::complex<double> synthesize_field(const FieldSpectrum& spec, std::span<const double> x);

/// s = beta^{-1/2} V^H a, p = s + white CN(0, sigma_n2) noise.
Observation observe(const DFoldVandermonde& V, const FieldSpectrum& spec, double sigma_n2, Rng& rng);
Observation observe(const DFoldVandermonde& V, const FieldSpectrum& spec, double sigma_n2, std::uint64_t seed);

enum class LmmseForm { Auto, Primal, Dual };

/// Linear MMSE estimate of a.  Auto picks the m x m dual system when m < n^d.
/// `truth` (optional) fills normalized_error.
LmmseResult lmmse(const DFoldVandermonde& V, const Observation& obs, const FieldSpectrum* truth = nullptr,
                  LmmseForm form = LmmseForm::Auto);

/// (1/n^d) tr (gamma/beta V V^H + I)^{-1}.
double trace_mse(const DFoldVandermonde& V, double gamma);

struct MseEstimate {
    double gamma = 0.0;
    double mean_trace = 0.0;
    double mean_error = 0.0;
    double se_trace = 0.0;
    double se_error = 0.0;
    int ill_conditioned = 0;
};

/// Averages over independent (V, a, noise) draws.  One draw per trial is
/// shared by every gamma in the sweep, so curves are paired across gamma.
std::vector<MseEstimate> mse_monte_carlo(const SamplingDistribution& dist, int n, int m,
                                         const std::vector<double>& gammas, int trials, std::uint64_t seed,
                                         Execution exec = Execution::Parallel);

MseEstimate mse_monte_carlo(const SamplingDistribution& dist, int n, int m, double gamma, int trials,
                            std::uint64_t seed, Execution exec = Execution::Parallel);

}  // namespace vanspec
