#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vanspec/parallel.hpp"
#include "vanspec/sampling.hpp"

namespace vanspec {

/// Eigenvalues below kAtomRelTol * (largest eigenvalue of the trial) count as
/// the atom at zero.
inline constexpr double kAtomRelTol = 1e-9;

struct Histogram {
    std::vector<double> edges;
    std::vector<double> density;

    std::size_t bins() const { return density.size(); }
    double mass() const;
};

/// Pooled spectrum of V V^H over independent trials.  The atom at zero is kept
/// as a mass and never binned; `positive` holds the remaining eigenvalues,
/// sorted, each carrying weight (1 - atom_zero_mass) / positive.size().
struct SpectrumSummary {
    std::vector<double> positive;
    double atom_zero_mass = 0.0;
    std::size_t eigenvalue_count = 0;
    int trials = 0;
    Histogram histogram;
    int n = 0;
    int d = 0;
    int m = 0;
    std::string distribution_id;
    std::uint64_t master_seed = 0;

    double beta() const;
    /// int z^p dF, atoms contributing zero.
    double moment(int p) const;
};

/// Eigenvalues of one trial: points drawn with make_rng(master_seed, trial).
std::vector<double> trial_eigenvalues(const SamplingDistribution& dist, int n, int m, std::uint64_t master_seed,
                                      std::size_t trial);

/// Average empirical spectral distribution over `trials` matrices.
/// `bins` = 0 selects Freedman-Diaconis on the pooled positive part.
SpectrumSummary aesd(const SamplingDistribution& dist, int n, int m, int trials, std::uint64_t seed, int bins = 0,
                     Execution exec = Execution::Parallel);

/// Histogram of sorted samples scaled to integrate to `mass`.
Histogram make_histogram(std::span<const double> sorted, double mass, int bins = 0);

/// mean of 1/(gamma * lambda + 1).
double empirical_eta(std::span<const double> eigenvalues, double gamma);
/// Same over a summary, atoms counted as exact zeros.
double empirical_eta(const SpectrumSummary& summary, double gamma);

/// Spectrum of the scaled-support law (1-c) delta(z) + c^2 f(c beta, c z)
/// given the base summary computed at aspect ratio c * beta.
SpectrumSummary transform_scaled_lsd(const SpectrumSummary& base, double c);

/// Two-sample Kolmogorov-Smirnov statistic of sorted samples.
double ks_distance(std::span<const double> a, std::span<const double> b);

/// int |h(y) - g(y)| dy over the union of the supports; g must be a density.
double l1_distance(const Histogram& h, const DensityOfDensity& g);

struct TraceMoments {
    std::vector<double> mean;     // E[tr((V V^H)^p)], p = 1..P
    std::vector<double> std_err;
};

/// Monte Carlo normalized-trace moments.
TraceMoments empirical_trace_moments(const SamplingDistribution& dist, int n, int m, int trials, std::uint64_t seed,
                                     int max_p, Execution exec = Execution::Parallel);

}  // namespace vanspec
