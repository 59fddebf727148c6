#include "vanspec/reconstruct.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vanspec {

namespace {

using cd = std::complex<double>;

Eigen::VectorXcd complex_gaussian(Eigen::Index size, double variance, Rng& rng) {
    std::normal_distribution<double> g(0.0, std::sqrt(0.5 * variance));
    Eigen::VectorXcd v(size);
    for (Eigen::Index i = 0; i < size; ++i) {
        const double re = g(rng);
        const double im = g(rng);
        v[i] = cd(re, im);
    }
    return v;
}

// Solves K x = rhs for Hermitian positive definite K; reports the condition estimate.
Eigen::VectorXcd hpd_solve(const Eigen::MatrixXcd& K, const Eigen::VectorXcd& rhs, bool& ill) {
    Eigen::LLT<Eigen::MatrixXcd> llt(K);
    if (llt.info() == Eigen::Success) {
        ill = llt.rcond() < 1.0 / kCondTol;
        return llt.solve(rhs);
    }
    ill = true;
    return K.ldlt().solve(rhs);
}

}  // namespace

FieldSpectrum generate_spectrum(int n, int d, double sigma_a2, Rng& rng) {
    if (!(sigma_a2 > 0.0)) throw std::invalid_argument("sigma_a^2 must be > 0");
    FieldSpectrum spec;
    spec.n = n;
    spec.d = d;
    spec.sigma_a2 = sigma_a2;
    spec.a = complex_gaussian(row_count(n, d), sigma_a2, rng);
    return spec;
}

FieldSpectrum generate_spectrum(int n, int d, double sigma_a2, std::uint64_t seed) {
    Rng rng(seed);
    return generate_spectrum(n, d, sigma_a2, rng);
}

std::complex<double> synthesize_field(const FieldSpectrum& spec, std::span<const double> x) {
    if (static_cast<int>(x.size()) != spec.d) throw std::invalid_argument("point dimension does not match the field");
    cd acc{0.0, 0.0};
    const int rows = static_cast<int>(spec.a.size());
    for (int r = 0; r < rows; ++r) {
        const auto ell = multi_index(r, spec.n, spec.d);
        double phase = 0.0;
        for (int j = 0; j < spec.d; ++j) phase += ell[j] * x[j];
        acc += spec.a[r] * std::polar(1.0, 2.0 * std::numbers::pi * phase);
    }
    return acc / std::sqrt(static_cast<double>(rows));
}

Observation observe(const DFoldVandermonde& V, const FieldSpectrum& spec, double sigma_n2, Rng& rng) {
    if (sigma_n2 < 0.0) throw std::invalid_argument("sigma_n^2 must be >= 0");
    if (spec.a.size() != V.rows()) throw std::invalid_argument("spectrum length does not match V");
    Observation obs;
    obs.sigma_a2 = spec.sigma_a2;
    obs.sigma_n2 = sigma_n2;
    obs.s = V.entries.adjoint() * spec.a / std::sqrt(V.beta());
    obs.p = obs.s;
    if (sigma_n2 > 0.0) obs.p += complex_gaussian(V.m(), sigma_n2, rng);
    return obs;
}

Observation observe(const DFoldVandermonde& V, const FieldSpectrum& spec, double sigma_n2, std::uint64_t seed) {
    Rng rng(seed);
    return observe(V, spec, sigma_n2, rng);
}

double trace_mse(const DFoldVandermonde& V, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    const Eigen::Index N = V.rows();
    Eigen::MatrixXcd K = (gamma / V.beta()) * gram_toeplitz(V.n, V.points);
    K.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXcd> llt(K);
    if (llt.info() != Eigen::Success) throw std::runtime_error("gamma/beta V V^H + I is not positive definite");
    // tr K^{-1} = |L^{-1}|_F^2
    Eigen::MatrixXcd Linv = Eigen::MatrixXcd::Identity(N, N);
    llt.matrixL().solveInPlace(Linv);
    return Linv.squaredNorm() / static_cast<double>(N);
}

namespace {

// a_hat only; `gram` is V V^H, needed by the primal form.
LmmseResult estimate(const DFoldVandermonde& V, const Eigen::MatrixXcd& gram, const Observation& obs,
                     const FieldSpectrum* truth, LmmseForm form) {
    if (!(obs.sigma_n2 > 0.0)) throw std::invalid_argument("lmmse needs sigma_n^2 > 0");
    if (obs.p.size() != V.m()) throw std::invalid_argument("observation length does not match V");
    const double beta = V.beta();
    const Eigen::Index N = V.rows(), m = V.m();
    LmmseResult r;
    r.dual_form = (form == LmmseForm::Dual) || (form == LmmseForm::Auto && m < N);
    if (r.dual_form) {
        Eigen::MatrixXcd K = (obs.sigma_a2 / beta) * (V.entries.adjoint() * V.entries);
        K.diagonal().array() += obs.sigma_n2;
        const Eigen::VectorXcd w = hpd_solve(K, obs.p, r.ill_conditioned);
        r.a_hat = (obs.sigma_a2 / std::sqrt(beta)) * (V.entries * w);
    } else {
        Eigen::MatrixXcd K = gram / beta;
        K.diagonal().array() += obs.sigma_n2 / obs.sigma_a2;
        r.a_hat = hpd_solve(K, V.entries * obs.p / std::sqrt(beta), r.ill_conditioned);
    }
    if (truth) r.normalized_error = (truth->a - r.a_hat).squaredNorm() / (static_cast<double>(N) * truth->sigma_a2);
    return r;
}

}  // namespace

LmmseResult lmmse(const DFoldVandermonde& V, const Observation& obs, const FieldSpectrum* truth, LmmseForm form) {
    const bool dual = (form == LmmseForm::Dual) || (form == LmmseForm::Auto && V.m() < V.rows());
    auto r = estimate(V, dual ? Eigen::MatrixXcd() : gram_toeplitz(V.n, V.points), obs, truth, form);
    r.trace_mse = trace_mse(V, obs.gamma());
    return r;
}

std::vector<MseEstimate> mse_monte_carlo(const SamplingDistribution& dist, int n, int m,
                                         const std::vector<double>& gammas, int trials, std::uint64_t seed,
                                         Execution exec) {
    if (trials < 1) throw std::invalid_argument("mse_monte_carlo needs at least one trial");
    for (double g : gammas)
        if (g < 0.0) throw std::invalid_argument("gamma must be >= 0");
    const std::size_t G = gammas.size();
    std::vector<double> tr(static_cast<std::size_t>(trials) * G), err(tr.size());
    std::vector<char> ill(tr.size(), 0);

    for_each_index(static_cast<std::size_t>(trials), exec, [&](std::size_t t) {
        Rng rng = make_rng(seed, t);
        const auto V = build_vandermonde(dist, dist.dim, n, m, rng);
        const auto spec = generate_spectrum(n, dist.dim, 1.0, rng);
        const Eigen::VectorXcd w = complex_gaussian(m, 1.0, rng);
        const Eigen::VectorXcd s = V.entries.adjoint() * spec.a / std::sqrt(V.beta());
        const double prior = spec.a.squaredNorm() / static_cast<double>(spec.a.size());
        const Eigen::MatrixXcd gram = gram_toeplitz(n, V.points);
        // Trace MSE through its eigenvalue form, one decomposition per trial.
        const auto eig = hermitian_eigenvalues(gram);
        for (std::size_t g = 0; g < G; ++g) {
            const std::size_t k = t * G + g;
            if (gammas[g] == 0.0) {
                tr[k] = 1.0;
                err[k] = prior;
                continue;
            }
            Observation obs;
            obs.sigma_a2 = 1.0;
            obs.sigma_n2 = 1.0 / gammas[g];
            obs.s = s;
            obs.p = s + std::sqrt(obs.sigma_n2) * w;
            const auto r = estimate(V, gram, obs, &spec, LmmseForm::Auto);
            double eta = 0.0;
            for (double v : eig) eta += 1.0 / (gammas[g] / V.beta() * v + 1.0);
            tr[k] = eta / static_cast<double>(eig.size());
            err[k] = r.normalized_error;
            ill[k] = r.ill_conditioned;
        }
    });

    std::vector<MseEstimate> out(G);
    for (std::size_t g = 0; g < G; ++g) {
        double st = 0, st2 = 0, se = 0, se2 = 0;
        int bad = 0;
        for (int t = 0; t < trials; ++t) {
            const std::size_t k = static_cast<std::size_t>(t) * G + g;
            st += tr[k];
            st2 += tr[k] * tr[k];
            se += err[k];
            se2 += err[k] * err[k];
            bad += ill[k];
        }
        auto& e = out[g];
        e.gamma = gammas[g];
        e.mean_trace = st / trials;
        e.mean_error = se / trials;
        if (trials > 1) {
            e.se_trace = std::sqrt(std::max(0.0, st2 / trials - e.mean_trace * e.mean_trace) / (trials - 1));
            e.se_error = std::sqrt(std::max(0.0, se2 / trials - e.mean_error * e.mean_error) / (trials - 1));
        }
        e.ill_conditioned = bad;
    }
    return out;
}

MseEstimate mse_monte_carlo(const SamplingDistribution& dist, int n, int m, double gamma, int trials,
                            std::uint64_t seed, Execution exec) {
    return mse_monte_carlo(dist, n, m, std::vector<double>{gamma}, trials, seed, exec).front();
}

}  // namespace vanspec
