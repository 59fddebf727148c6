#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <math.h>  // pchip.hpp calls isnan unqualified

#include <boost/math/interpolators/pchip.hpp>

#include "vanspec/parallel.hpp"
#include "vanspec/sampling.hpp"

namespace vanspec {

/// eta_u(beta', gamma') for uniform phases.
using EtaFunction = std::function<double(double beta, double gamma)>;

/// Values of eta^{(n)}_u on a (beta, gamma) grid, measured by simulation and
/// interpolated with monotone cubics in log beta and log gamma.
class EtaTable {
public:
    int d = 1;
    int n = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<double> betas;   // ascending, as realized by n^d / m
    std::vector<int> columns;    // m per beta node
    std::vector<double> gammas;  // ascending, > 0
    std::vector<std::vector<double>> values;  // values[beta][gamma]

    /// Nodes are placed at m = round(n^d / beta) for each requested beta (duplicates merged).
    static EtaTable build(int d, const std::vector<double>& beta_grid, const std::vector<double>& gamma_grid, int n,
                          int trials, std::uint64_t seed, Execution exec = Execution::Parallel);

    /// `nodes` log-spaced betas whose realized values cover [beta_lo, beta_hi].
    static EtaTable build_covering(int d, double beta_lo, double beta_hi, int n, int trials, std::uint64_t seed,
                                   int nodes = 24, Execution exec = Execution::Parallel);

    /// m = round(n^d / beta) per node, descending (ascending beta), duplicates merged.
    static std::vector<int> node_columns(int d, int n, const std::vector<double>& beta_grid);
    /// The beta grid build_covering uses.
    static std::vector<double> covering_grid(int d, double beta_lo, double beta_hi, int n, int nodes = 24);
    /// Throws std::range_error outside [betas.front(), betas.back()] or above gammas.back().
    double operator()(double beta, double gamma) const;

    bool covers(double beta_lo, double beta_hi) const;
    EtaFunction function() const;

    std::string to_json() const;
    static EtaTable from_json(const std::string& text);
    void save(const std::string& path) const;
    static EtaTable load(const std::string& path);

    /// Default gamma grid: 161 log-spaced points on [1e-3, 1e7].
    static std::vector<double> default_gammas();

    /// Rebuilds the interpolants; call after editing the public grids by hand.
    void finalize();

private:
    using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
    std::shared_ptr<const std::vector<Pchip>> along_gamma_;

    double along_gamma(std::size_t node, double gamma) const;
};

/// `count` log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int count);

/// eta_x(beta, gamma) = 1 - |A| + |A| int g(y) eta_u(beta / y, gamma y) dy.
/// Atoms give an exact finite sum, densities adaptive quadrature at `tol`.
double eta_mixture(const DensityOfDensity& gx, double support_measure, double beta, double gamma,
                   const EtaFunction& eta_u, double tol = 1e-4);

/// MSE_inf = eta_x(beta, gamma / beta).
double asymptotic_mse(const DensityOfDensity& gx, double support_measure, double beta, double gamma,
                      const EtaFunction& eta_u);

/// Range of beta' = beta / y the mixture will query.
std::pair<double, double> mixture_beta_range(const DensityOfDensity& gx, double beta_lo, double beta_hi);

}  // namespace vanspec
