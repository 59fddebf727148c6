#include "vanspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vanspec/vandermonde.hpp"

namespace vanspec {

double Histogram::mass() const {
    double s = 0.0;
    for (std::size_t b = 0; b < density.size(); ++b) s += density[b] * (edges[b + 1] - edges[b]);
    return s;
}

double SpectrumSummary::beta() const {
    double rows = 1.0;
    for (int j = 0; j < d; ++j) rows *= n;
    return rows / m;
}

double SpectrumSummary::moment(int p) const {
    if (positive.empty()) return 0.0;
    double s = 0.0;
    for (double v : positive) s += std::pow(v, p);
    return (1.0 - atom_zero_mass) * s / static_cast<double>(positive.size());
}

std::vector<double> trial_eigenvalues(const SamplingDistribution& dist, int n, int m, std::uint64_t master_seed,
                                      std::size_t trial) {
    Rng rng = make_rng(master_seed, trial);
    const Eigen::MatrixXd pts = dist.sample(rng, m);
    return hermitian_eigenvalues(gram_toeplitz(n, pts));
}

Histogram make_histogram(std::span<const double> sorted, double mass, int bins) {
    Histogram h;
    if (sorted.empty()) return h;
    const double lo = sorted.front(), hi = sorted.back();
    if (bins <= 0) {
        const auto N = sorted.size();
        const double q1 = sorted[N / 4], q3 = sorted[(3 * N) / 4];
        const double width = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(N));
        bins = (width > 0.0) ? static_cast<int>(std::ceil((hi - lo) / width)) : 1;
        bins = std::clamp(bins, 1, 10000);
    }
    const double span = (hi > lo) ? hi - lo : std::max(1e-12, std::abs(hi) * 1e-9);
    h.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) h.edges[b] = lo + span * b / bins;
    h.density.assign(bins, 0.0);
    for (double v : sorted) {
        auto b = static_cast<std::size_t>((v - lo) / span * bins);
        h.density[std::min<std::size_t>(b, bins - 1)] += 1.0;
    }
    const double width = span / bins;
    for (double& c : h.density) c *= mass / (static_cast<double>(sorted.size()) * width);
    return h;
}

SpectrumSummary aesd(const SamplingDistribution& dist, int n, int m, int trials, std::uint64_t seed, int bins,
                     Execution exec) {
    if (trials < 1) throw std::invalid_argument("aesd needs at least one trial");
    std::vector<std::vector<double>> per_trial(trials);
    for_each_index(static_cast<std::size_t>(trials), exec,
                   [&](std::size_t t) { per_trial[t] = trial_eigenvalues(dist, n, m, seed, t); });

    SpectrumSummary s;
    std::size_t atoms = 0;
    for (const auto& ev : per_trial) {
        const double cut = kAtomRelTol * ev.back();
        for (double v : ev) {
            if (v < cut || v == 0.0) ++atoms;
            else s.positive.push_back(v);
        }
        s.eigenvalue_count += ev.size();
    }
    std::ranges::sort(s.positive);
    s.atom_zero_mass = static_cast<double>(atoms) / static_cast<double>(s.eigenvalue_count);
    s.histogram = make_histogram(s.positive, 1.0 - s.atom_zero_mass, bins);
    s.trials = trials;
    s.n = n;
    s.d = dist.dim;
    s.m = m;
    s.distribution_id = dist.id;
    s.master_seed = seed;
    return s;
}

double empirical_eta(std::span<const double> eigenvalues, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    if (eigenvalues.empty()) throw std::invalid_argument("no eigenvalues");
    double s = 0.0;
    for (double v : eigenvalues) s += 1.0 / (gamma * v + 1.0);
    return s / static_cast<double>(eigenvalues.size());
}

double empirical_eta(const SpectrumSummary& summary, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    if (summary.positive.empty()) return 1.0;
    return summary.atom_zero_mass + (1.0 - summary.atom_zero_mass) * empirical_eta(summary.positive, gamma);
}

SpectrumSummary transform_scaled_lsd(const SpectrumSummary& base, double c) {
    if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("scale c must lie in (0, 1]");
    SpectrumSummary out = base;
    // lambda -> lambda / c carries density c f(c z); the c^2 prefactor leaves
    // mass c for the positive part.
    for (double& v : out.positive) v /= c;
    out.atom_zero_mass = (1.0 - c) + c * base.atom_zero_mass;
    out.histogram = make_histogram(out.positive, 1.0 - out.atom_zero_mass, static_cast<int>(base.histogram.bins()));
    out.m = std::max(1, static_cast<int>(std::lround(base.m * c)));
    out.distribution_id = "scaled(" + std::to_string(c) + "):" + base.distribution_id;
    return out;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance needs non-empty samples");
    std::size_t i = 0, j = 0;
    double worst = 0.0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        worst = std::max(worst, std::abs(i / na - j / nb));
    }
    return worst;
}

double l1_distance(const Histogram& h, const DensityOfDensity& g) {
    if (std::holds_alternative<DiscreteAtoms>(g)) throw std::invalid_argument("l1_distance needs a g with a density");
    if (h.bins() == 0) return 1.0;
    std::vector<double> cuts;
    if (const auto* cf = std::get_if<ClosedFormGx>(&g)) {
        cuts = cf->breakpoints;
        cuts.push_back(cf->lo);
        cuts.push_back(cf->hi);
    } else {
        cuts = std::get<EmpiricalGx>(g).edges;
    }
    const auto [glo, ghi] = gx_support(g);

    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto piece = [&](const std::function<double(double)>& f, double a, double b) {
        std::vector<double> pts{a};
        for (double c : cuts)
            if (c > a && c < b) pts.push_back(c);
        pts.push_back(b);
        std::ranges::sort(pts);
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            if (pts[i + 1] > pts[i]) acc += GK::integrate(f, pts[i], pts[i + 1], 12, 1e-9);
        return acc;
    };
    auto gpdf = [&](double y) { return gx_pdf(g, y); };

    double total = 0.0, covered = 0.0;
    for (std::size_t b = 0; b < h.bins(); ++b) {
        const double hb = h.density[b];
        const double lo = h.edges[b], hi = h.edges[b + 1];
        total += piece([&](double y) { return std::abs(hb - gpdf(y)); }, lo, hi);
        covered += piece(gpdf, std::max(lo, glo), std::min(hi, ghi));
    }
    const double g_mass = piece(gpdf, glo, ghi);
    return total + std::max(0.0, g_mass - covered);
}

TraceMoments empirical_trace_moments(const SamplingDistribution& dist, int n, int m, int trials, std::uint64_t seed,
                                     int max_p, Execution exec) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    std::vector<std::vector<double>> per_trial(trials);
    for_each_index(static_cast<std::size_t>(trials), exec, [&](std::size_t t) {
        Rng rng = make_rng(seed, t);
        per_trial[t] = normalized_trace_powers(gram_toeplitz(n, dist.sample(rng, m)), max_p);
    });
    TraceMoments out;
    out.mean.assign(max_p, 0.0);
    out.std_err.assign(max_p, 0.0);
    for (int p = 0; p < max_p; ++p) {
        double s = 0.0, s2 = 0.0;
        for (const auto& tr : per_trial) {
            s += tr[p];
            s2 += tr[p] * tr[p];
        }
        const double mean = s / trials;
        out.mean[p] = mean;
        out.std_err[p] = trials > 1 ? std::sqrt(std::max(0.0, s2 / trials - mean * mean) / (trials - 1)) : 0.0;
    }
    return out;
}

}  // namespace vanspec
