#include "vanspec/vandermonde.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace vanspec {

using cd = std::complex<double>;

int row_count(int n, int d) {
    if (n < 1 || d < 1) throw std::invalid_argument("n and d must be >= 1");
    long long rows = 1;
    for (int j = 0; j < d; ++j) {
        rows *= n;
        if (rows > kMaxRows)
            throw std::invalid_argument("n^d = " + std::to_string(n) + "^" + std::to_string(d) + " exceeds the cap of " +
                                        std::to_string(kMaxRows) + " rows");
    }
    return static_cast<int>(rows);
}

int row_index(const std::vector<int>& ell, int n) {
    int idx = 0, stride = 1;
    for (int l : ell) {
        idx += stride * l;
        stride *= n;
    }
    return idx;
}

std::vector<int> multi_index(int row, int n, int d) {
    std::vector<int> ell(d);
    for (int j = 0; j < d; ++j) {
        ell[j] = row % n;
        row /= n;
    }
    return ell;
}

DFoldVandermonde vandermonde_from_points(int n, const Eigen::MatrixXd& points) {
    const int d = static_cast<int>(points.rows());
    const int m = static_cast<int>(points.cols());
    if (m < 1) throw std::invalid_argument("need at least one column");
    const int rows = row_count(n, d);
    DFoldVandermonde V;
    V.n = n;
    V.d = d;
    V.points = points;
    V.entries.resize(rows, m);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (int q = 0; q < m; ++q) {
        for (int r = 0; r < rows; ++r) {
            int rest = r;
            double phase = 0.0;
            for (int j = 0; j < d; ++j) {
                phase += (rest % n) * points(j, q);
                rest /= n;
            }
            V.entries(r, q) = scale * std::polar(1.0, -2.0 * std::numbers::pi * phase);
        }
    }
    return V;
}

DFoldVandermonde build_vandermonde(const SamplingDistribution& dist, int d, int n, int m, Rng& rng) {
    if (dist.dim != d)
        throw std::invalid_argument("distribution '" + dist.id + "' has dimension " + std::to_string(dist.dim) +
                                    ", requested d = " + std::to_string(d));
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    row_count(n, d);
    return vandermonde_from_points(n, dist.sample(rng, m));
}

DFoldVandermonde build_vandermonde(const SamplingDistribution& dist, int d, int n, int m, std::uint64_t seed) {
    Rng rng(seed);
    return build_vandermonde(dist, d, n, m, rng);
}

Eigen::MatrixXcd gram_direct(const DFoldVandermonde& V) { return V.entries * V.entries.adjoint(); }

Eigen::MatrixXcd gram_toeplitz(int n, const Eigen::MatrixXd& points) {
    const int d = static_cast<int>(points.rows());
    const int m = static_cast<int>(points.cols());
    const int rows = row_count(n, d);
    const int span = 2 * n - 1;  // offsets -(n-1)..(n-1), stored shifted by n-1
    int cells = 1;
    for (int j = 0; j < d; ++j) cells *= span;

    std::vector<cd> acc(cells, cd{0.0, 0.0});
    std::vector<cd> phasor(static_cast<std::size_t>(d) * span);
    std::vector<cd> partial(cells);
    for (int q = 0; q < m; ++q) {
        for (int j = 0; j < d; ++j) {
            const cd step = std::polar(1.0, -2.0 * std::numbers::pi * points(j, q));
            cd* row = &phasor[static_cast<std::size_t>(j) * span];
            row[n - 1] = 1.0;
            cd cur = 1.0;
            for (int k = 1; k < n; ++k) {
                cur *= step;
                row[n - 1 + k] = cur;
                row[n - 1 - k] = std::conj(cur);
            }
        }
        // Tensor product over dimensions; dimension d-1 varies fastest.
        partial[0] = 1.0;
        int filled = 1;
        for (int j = 0; j < d; ++j) {
            const cd* row = &phasor[static_cast<std::size_t>(j) * span];
            for (int b = filled - 1; b >= 0; --b) {
                const cd base = partial[b];
                for (int k = span - 1; k >= 0; --k) partial[b * span + k] = base * row[k];
            }
            filled *= span;
        }
        for (int c = 0; c < cells; ++c) acc[c] += partial[c];
    }
    const double inv_m = 1.0 / m;
    for (auto& v : acc) v *= inv_m;

    auto offset_cell = [&](const std::vector<int>& off) {
        int c = 0;
        for (int j = 0; j < d; ++j) c = c * span + (off[j] + n - 1);
        return c;
    };
    std::vector<std::vector<int>> idx(rows);
    for (int r = 0; r < rows; ++r) idx[r] = multi_index(r, n, d);
    Eigen::MatrixXcd G(rows, rows);
    std::vector<int> off(d);
    for (int r = 0; r < rows; ++r) {
        for (int s = 0; s < rows; ++s) {
            for (int j = 0; j < d; ++j) off[j] = idx[r][j] - idx[s][j];
            G(r, s) = acc[offset_cell(off)];
        }
    }
    return G;
}

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& gram) {
    const Eigen::MatrixXcd h = 0.5 * (gram + gram.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "Hermitian eigensolver did not converge (size " << h.rows() << ", Frobenius norm " << h.norm() << ")";
        throw std::runtime_error(os.str());
    }
    std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    const double tol = 1e-10 * std::max(1.0, ev.empty() ? 0.0 : ev.back());
    for (double& v : ev) {
        if (v < -tol) throw std::runtime_error("Gram matrix has eigenvalue " + std::to_string(v) + " < -tolerance");
        if (v < 0.0) v = 0.0;
    }
    return ev;
}

std::vector<double> gram_eigenvalues(const DFoldVandermonde& V) { return hermitian_eigenvalues(gram_direct(V)); }

std::vector<double> normalized_trace_powers(const Eigen::MatrixXcd& gram, int max_p) {
    if (max_p < 1) return {};
    const double rows = static_cast<double>(gram.rows());
    // powers[j] = G^j for j = 1..ceil(max_p/2); tr(G^{i+j}) = sum_ab (G^i)_ab (G^j)_ba.
    const int half = (max_p + 1) / 2;
    std::vector<Eigen::MatrixXcd> powers(half + 1);
    powers[1] = gram;
    for (int j = 2; j <= half; ++j) powers[j] = powers[j - 1] * gram;
    std::vector<double> out(max_p);
    out[0] = gram.trace().real() / rows;
    for (int p = 2; p <= max_p; ++p) {
        const int i = p / 2, j = p - p / 2;
        out[p - 1] = (powers[i].array() * powers[j].transpose().array()).sum().real() / rows;
    }
    return out;
}

}  // namespace vanspec
