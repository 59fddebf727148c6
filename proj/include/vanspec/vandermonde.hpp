#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "vanspec/sampling.hpp"

namespace vanspec {

/// Desk-scale cap on the number of rows n^d.
inline constexpr int kMaxRows = 1024;

/// n^d x m matrix with entries m^{-1/2} exp(-2 pi i l . x_q), rows ordered by
/// nu(l) = sum_j n^{j-1} l_j.
struct DFoldVandermonde {
    int n = 0;
    int d = 0;
    Eigen::MatrixXd points;     // d x m
    Eigen::MatrixXcd entries;   // n^d x m

    int rows() const { return static_cast<int>(entries.rows()); }
    int m() const { return static_cast<int>(entries.cols()); }
    /// beta_{n,m} = n^d / m
    double beta() const { return static_cast<double>(rows()) / m(); }
};

/// n^d, validated against kMaxRows.
int row_count(int n, int d);

/// nu(l) for l in {0..n-1}^d.
int row_index(const std::vector<int>& ell, int n);
std::vector<int> multi_index(int row, int n, int d);

/// Draws m points from `dist` with Rng(seed) and builds V.
DFoldVandermonde build_vandermonde(const SamplingDistribution& dist, int d, int n, int m, std::uint64_t seed);
DFoldVandermonde build_vandermonde(const SamplingDistribution& dist, int d, int n, int m, Rng& rng);
DFoldVandermonde vandermonde_from_points(int n, const Eigen::MatrixXd& points);

/// V V^H by explicit product.
Eigen::MatrixXcd gram_direct(const DFoldVandermonde& V);

/// V V^H from the points alone.  (V V^H)_{l,l'} depends only on l - l', so the
/// (2n-1)^d distinct values are accumulated once and scattered; cost
/// O(m (2n-1)^d) instead of O(n^{2d} m).
Eigen::MatrixXcd gram_toeplitz(int n, const Eigen::MatrixXd& points);

/// Ascending eigenvalues of a Hermitian matrix.  The matrix is symmetrized
/// first; negatives down to -1e-10 * max(1, lambda_max) are clamped to zero,
/// anything lower is an error.
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& gram);

std::vector<double> gram_eigenvalues(const DFoldVandermonde& V);

/// Normalized traces tr(G^p) / rows for p = 1..max_p.
std::vector<double> normalized_trace_powers(const Eigen::MatrixXcd& gram, int max_p);

}  // namespace vanspec
