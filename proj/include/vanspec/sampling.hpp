#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "vanspec/parallel.hpp"

namespace vanspec {

/// g_x given analytically.  `breakpoints` (inside [lo, hi]) split the support
/// into smooth pieces for quadrature.
struct ClosedFormGx {
    std::function<double(double)> pdf;
    std::function<double(double)> cdf;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> breakpoints;
};

/// g_x = sum_i (measure_i / |A|) delta(y - level_i); pairs are (level, measure).
struct DiscreteAtoms {
    std::vector<std::pair<double, double>> atoms;
};

/// Histogram of density values over a grid covering A.
struct EmpiricalGx {
    std::vector<double> edges;
    std::vector<double> density;
};

using DensityOfDensity = std::variant<ClosedFormGx, DiscreteAtoms, EmpiricalGx>;

/// Distribution of sampling points on H = [-1/2, 1/2)^d.
struct SamplingDistribution {
    int dim = 1;
    std::string id;
    double support_measure = 1.0;  // |A|, A = {z : f(z) > 0}
    std::function<double(std::span<const double>)> density;
    /// Draws one point into `out` (size dim).
    std::function<void(Rng&, std::span<double>)> draw;
    DensityOfDensity gx;
    /// Closed-form I_k = int_H f^k, when known.
    std::function<double(int)> power_integral;

    /// m i.i.d. points as columns of a dim x m matrix.
    Eigen::MatrixXd sample(Rng& rng, int m) const;
};

SamplingDistribution uniform_distribution(int d);

/// Uniform on a centred cube of measure c (side c^{1/d}); zero elsewhere.
SamplingDistribution scaled_uniform_distribution(double c, int d);

/// Piecewise-constant density on vertical strips z_1 in consecutive slabs of
/// widths |A_i|; `levels[i]` is the density on strip i.  Levels must already
/// integrate to one.
SamplingDistribution strip_distribution(std::vector<double> widths, std::vector<double> levels, std::string id);

/// int_0^inf g(y) h(y) dy for any representation of g.
double integrate_against_gx(const DensityOfDensity& gx, const std::function<double(double)>& h, double tol = 1e-10);

/// Smallest and largest y carrying g mass.
std::pair<double, double> gx_support(const DensityOfDensity& gx);

/// g(y), zero outside the support; atoms have no pointwise value (returns 0).
double gx_pdf(const DensityOfDensity& gx, double y);

/// Histogram of f over a midpoint grid with `grid_per_dim`^d cells, restricted to f > 0.
EmpiricalGx empirical_gx(const SamplingDistribution& dist, int grid_per_dim, int bins);

}  // namespace vanspec
