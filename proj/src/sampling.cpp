#include "vanspec/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace vanspec {

namespace {

double integrate_segment(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol, &err);
}

}  // namespace

Eigen::MatrixXd SamplingDistribution::sample(Rng& rng, int m) const {
    Eigen::MatrixXd pts(dim, m);
    for (int q = 0; q < m; ++q) draw(rng, std::span<double>(pts.col(q).data(), static_cast<std::size_t>(dim)));
    return pts;
}

SamplingDistribution uniform_distribution(int d) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    SamplingDistribution dist;
    dist.dim = d;
    dist.id = "uniform-d" + std::to_string(d);
    dist.support_measure = 1.0;
    dist.density = [](std::span<const double> z) {
        for (double v : z)
            if (v < -0.5 || v >= 0.5) return 0.0;
        return 1.0;
    };
    dist.draw = [](Rng& rng, std::span<double> out) {
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        for (double& v : out) v = u(rng);
    };
    dist.gx = DiscreteAtoms{{{1.0, 1.0}}};
    dist.power_integral = [](int) { return 1.0; };
    return dist;
}

SamplingDistribution scaled_uniform_distribution(double c, int d) {
    if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("covered fraction c must lie in (0, 1]");
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    if (c == 1.0) return uniform_distribution(d);
    const double half = 0.5 * std::pow(c, 1.0 / d);
    SamplingDistribution dist;
    dist.dim = d;
    dist.id = "hole-c" + std::to_string(c) + "-d" + std::to_string(d);
    dist.support_measure = c;
    dist.density = [half, c](std::span<const double> z) {
        for (double v : z)
            if (v < -half || v >= half) return 0.0;
        return 1.0 / c;
    };
    dist.draw = [half](Rng& rng, std::span<double> out) {
        std::uniform_real_distribution<double> u(-half, half);
        for (double& v : out) v = u(rng);
    };
    dist.gx = DiscreteAtoms{{{1.0 / c, c}}};
    dist.power_integral = [c](int k) { return std::pow(c, 1.0 - k); };
    return dist;
}

SamplingDistribution strip_distribution(std::vector<double> widths, std::vector<double> levels, std::string id) {
    if (widths.empty() || widths.size() != levels.size())
        throw std::invalid_argument("strip distribution needs matching, non-empty widths and levels");
    const double total = std::accumulate(widths.begin(), widths.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("strip widths must sum to 1");
    double mass = 0.0;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        if (widths[i] <= 0.0 || levels[i] < 0.0) throw std::invalid_argument("strip widths must be > 0, levels >= 0");
        mass += widths[i] * levels[i];
    }
    if (std::abs(mass - 1.0) > 1e-9) throw std::invalid_argument("strip levels do not integrate to 1");

    std::vector<double> left(widths.size());
    double edge = -0.5;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        left[i] = edge;
        edge += widths[i];
    }

    SamplingDistribution dist;
    dist.dim = 2;
    dist.id = std::move(id);
    DiscreteAtoms atoms;
    double measure = 0.0;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        if (levels[i] > 0.0) {
            atoms.atoms.emplace_back(levels[i], widths[i]);
            measure += widths[i];
        }
    }
    dist.support_measure = measure;
    dist.gx = atoms;
    dist.density = [left, widths, levels](std::span<const double> z) {
        if (z[0] < -0.5 || z[0] >= 0.5 || z[1] < -0.5 || z[1] >= 0.5) return 0.0;
        for (std::size_t i = left.size(); i-- > 0;)
            if (z[0] >= left[i]) return levels[i];
        return levels.front();
    };
    std::vector<double> weights(widths.size());
    for (std::size_t i = 0; i < widths.size(); ++i) weights[i] = widths[i] * levels[i];
    dist.draw = [left, widths, weights](Rng& rng, std::span<double> out) {
        std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
        const std::size_t i = pick(rng);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        out[0] = std::min(left[i] + widths[i] * u(rng), std::nextafter(0.5, 0.0));
        out[1] = u(rng) - 0.5;
    };
    dist.power_integral = [widths, levels](int k) {
        double s = 0.0;
        for (std::size_t i = 0; i < widths.size(); ++i) s += widths[i] * std::pow(levels[i], k);
        return s;
    };
    return dist;
}

double integrate_against_gx(const DensityOfDensity& gx, const std::function<double(double)>& h, double tol) {
    return std::visit(
        [&](const auto& g) -> double {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, DiscreteAtoms>) {
                double total = 0.0, acc = 0.0;
                for (const auto& [level, measure] : g.atoms) {
                    total += measure;
                    acc += measure * h(level);
                }
                return acc / total;
            } else if constexpr (std::is_same_v<G, ClosedFormGx>) {
                std::vector<double> cuts{g.lo};
                for (double b : g.breakpoints)
                    if (b > g.lo && b < g.hi) cuts.push_back(b);
                cuts.push_back(g.hi);
                std::ranges::sort(cuts);
                auto f = [&](double y) { return g.pdf(y) * h(y); };
                double acc = 0.0;
                for (std::size_t i = 0; i + 1 < cuts.size(); ++i) acc += integrate_segment(f, cuts[i], cuts[i + 1], tol);
                return acc;
            } else {
                double acc = 0.0;
                for (std::size_t i = 0; i < g.density.size(); ++i) {
                    if (g.density[i] == 0.0) continue;
                    acc += g.density[i] * integrate_segment(h, g.edges[i], g.edges[i + 1], tol);
                }
                return acc;
            }
        },
        gx);
}

std::pair<double, double> gx_support(const DensityOfDensity& gx) {
    return std::visit(
        [](const auto& g) -> std::pair<double, double> {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, DiscreteAtoms>) {
                double lo = INFINITY, hi = -INFINITY;
                for (const auto& a : g.atoms) {
                    lo = std::min(lo, a.first);
                    hi = std::max(hi, a.first);
                }
                return {lo, hi};
            } else if constexpr (std::is_same_v<G, ClosedFormGx>) {
                return {g.lo, g.hi};
            } else {
                std::size_t first = 0, last = g.density.size();
                while (first < last && g.density[first] == 0.0) ++first;
                while (last > first && g.density[last - 1] == 0.0) --last;
                return {g.edges[first], g.edges[last]};
            }
        },
        gx);
}

double gx_pdf(const DensityOfDensity& gx, double y) {
    if (const auto* g = std::get_if<ClosedFormGx>(&gx)) return (y >= g->lo && y < g->hi) ? g->pdf(y) : 0.0;
    if (const auto* g = std::get_if<EmpiricalGx>(&gx)) {
        auto it = std::upper_bound(g->edges.begin(), g->edges.end(), y);
        if (it == g->edges.begin() || it == g->edges.end()) return 0.0;
        return g->density[static_cast<std::size_t>(it - g->edges.begin()) - 1];
    }
    return 0.0;
}

EmpiricalGx empirical_gx(const SamplingDistribution& dist, int grid_per_dim, int bins) {
    if (grid_per_dim < 1 || bins < 1) throw std::invalid_argument("empirical_gx needs a positive grid and bin count");
    const int d = dist.dim;
    std::size_t cells = 1;
    for (int j = 0; j < d; ++j) cells *= static_cast<std::size_t>(grid_per_dim);
    std::vector<double> values;
    values.reserve(cells);
    std::vector<double> z(d);
    for (std::size_t c = 0; c < cells; ++c) {
        std::size_t rest = c;
        for (int j = 0; j < d; ++j) {
            z[j] = -0.5 + (static_cast<double>(rest % grid_per_dim) + 0.5) / grid_per_dim;
            rest /= grid_per_dim;
        }
        const double f = dist.density(z);
        if (f > 0.0) values.push_back(f);
    }
    if (values.empty()) throw std::invalid_argument("density vanishes on the whole grid");
    const auto [mn, mx] = std::ranges::minmax(values);
    const double lo = mn, hi = (mx > mn) ? mx : mn * (1.0 + 1e-9) + 1e-12;
    EmpiricalGx g;
    g.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) g.edges[b] = lo + (hi - lo) * b / bins;
    g.edges.back() = std::nextafter(hi, INFINITY);
    g.density.assign(bins, 0.0);
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / (g.edges.back() - lo) * bins);
        g.density[std::min<std::size_t>(b, bins - 1)] += 1.0;
    }
    for (int b = 0; b < bins; ++b) g.density[b] /= static_cast<double>(values.size()) * (g.edges[b + 1] - g.edges[b]);
    return g;
}

}  // namespace vanspec
