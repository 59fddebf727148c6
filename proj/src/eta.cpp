#include "vanspec/eta.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "vanspec/spectrum.hpp"
#include "vanspec/vandermonde.hpp"

namespace vanspec {

namespace {

constexpr double kSlack = 1e-9;

std::string range_message(const char* what, double v, double lo, double hi) {
    std::ostringstream os;
    os << "eta table queried at " << what << " = " << v << " outside [" << lo << ", " << hi
       << "]; extend the table (--eta-table) to cover it";
    return os.str();
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw std::invalid_argument("log_grid needs 0 < lo <= hi and count >= 1");
    if (count == 1) return {lo};
    std::vector<double> g(count);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < count; ++i) g[i] = std::exp(a + (b - a) * i / (count - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> EtaTable::default_gammas() { return log_grid(1e-3, 1e7, 161); }

EtaTable EtaTable::build(int d, const std::vector<double>& beta_grid, const std::vector<double>& gamma_grid, int n,
                         int trials, std::uint64_t seed, Execution exec) {
    if (beta_grid.empty() || gamma_grid.empty()) throw std::invalid_argument("eta table needs non-empty grids");
    if (trials < 1) throw std::invalid_argument("eta table needs at least one trial");
    if (!std::ranges::is_sorted(gamma_grid) || gamma_grid.front() <= 0.0)
        throw std::invalid_argument("gamma grid must be positive and ascending");
    const int rows = row_count(n, d);

    EtaTable t;
    t.d = d;
    t.n = n;
    t.trials = trials;
    t.seed = seed;
    t.gammas = gamma_grid;
    const std::vector<int> ms = node_columns(d, n, beta_grid);
    t.columns = ms;
    for (int m : ms) t.betas.push_back(static_cast<double>(rows) / m);

    const auto uniform = uniform_distribution(d);
    const std::size_t nodes = ms.size();
    std::vector<std::vector<double>> eig(nodes * static_cast<std::size_t>(trials));
    for_each_index(eig.size(), exec, [&](std::size_t i) {
        const std::size_t node = i / trials, trial = i % trials;
        eig[i] = trial_eigenvalues(uniform, n, ms[node], derive_seed(seed, node), trial);
    });

    t.values.assign(nodes, std::vector<double>(gamma_grid.size(), 0.0));
    for (std::size_t node = 0; node < nodes; ++node) {
        for (std::size_t g = 0; g < gamma_grid.size(); ++g) {
            double s = 0.0;
            std::size_t count = 0;
            for (int trial = 0; trial < trials; ++trial) {
                for (double v : eig[node * trials + trial]) s += 1.0 / (gamma_grid[g] * v + 1.0);
                count += eig[node * trials + trial].size();
            }
            t.values[node][g] = s / static_cast<double>(count);
        }
    }
    t.finalize();
    return t;
}

EtaTable EtaTable::build_covering(int d, double beta_lo, double beta_hi, int n, int trials, std::uint64_t seed,
                                  int nodes, Execution exec) {
    return build(d, covering_grid(d, beta_lo, beta_hi, n, nodes), default_gammas(), n, trials, seed, exec);
}

std::vector<int> EtaTable::node_columns(int d, int n, const std::vector<double>& beta_grid) {
    const int rows = row_count(n, d);
    std::vector<int> ms;
    for (double b : beta_grid) {
        if (!(b > 0.0)) throw std::invalid_argument("beta nodes must be > 0");
        ms.push_back(std::max(1, static_cast<int>(std::lround(rows / b))));
    }
    // Descending m is ascending beta.
    std::ranges::sort(ms, std::greater<>());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    return ms;
}

std::vector<double> EtaTable::covering_grid(int d, double beta_lo, double beta_hi, int n, int nodes) {
    if (!(beta_lo > 0.0) || beta_hi < beta_lo) throw std::invalid_argument("beta range must satisfy 0 < lo <= hi");
    const double rows = row_count(n, d);
    // Round the end nodes outward so the realized betas enclose the range.
    const double lo = rows / std::ceil(rows / beta_lo * (1.0 - kSlack));
    const double hi = rows / std::max(1.0, std::floor(rows / beta_hi * (1.0 + kSlack)));
    auto grid = log_grid(std::min(lo, beta_lo), std::max(hi, beta_hi), std::max(nodes, 2));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

void EtaTable::finalize() {
    if (betas.size() != values.size() || betas.size() != columns.size())
        throw std::invalid_argument("eta table beta nodes and values disagree");
    auto interp = std::make_shared<std::vector<Pchip>>();
    std::vector<double> lg(gammas.size());
    for (std::size_t g = 0; g < gammas.size(); ++g) lg[g] = std::log(gammas[g]);
    if (gammas.size() >= 4) {
        for (const auto& row : values) {
            if (row.size() != gammas.size()) throw std::invalid_argument("eta table row has the wrong length");
            interp->emplace_back(std::vector<double>(lg), std::vector<double>(row));
        }
    }
    along_gamma_ = std::move(interp);
}

double EtaTable::along_gamma(std::size_t node, double gamma) const {
    if (gamma <= 0.0) return 1.0;
    if (gamma < gammas.front()) {
        const double w = gamma / gammas.front();
        return (1.0 - w) + w * values[node].front();
    }
    if (gamma > gammas.back() * (1.0 + kSlack))
        throw std::range_error(range_message("gamma", gamma, 0.0, gammas.back()));
    gamma = std::min(gamma, gammas.back());
    const double lg = std::log(gamma);
    if (along_gamma_ && !along_gamma_->empty()) return (*along_gamma_)[node](std::clamp(lg, std::log(gammas.front()), std::log(gammas.back())));
    // Too few points for a cubic: linear in log gamma.
    auto it = std::upper_bound(gammas.begin(), gammas.end(), gamma);
    if (it == gammas.end()) return values[node].back();
    const std::size_t j = static_cast<std::size_t>(it - gammas.begin());
    const double w = (lg - std::log(gammas[j - 1])) / (std::log(gammas[j]) - std::log(gammas[j - 1]));
    return (1.0 - w) * values[node][j - 1] + w * values[node][j];
}

double EtaTable::operator()(double beta, double gamma) const {
    if (betas.empty()) throw std::logic_error("empty eta table");
    if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    if (gamma == 0.0) return 1.0;
    const double lo = betas.front(), hi = betas.back();
    if (beta < lo * (1.0 - kSlack) || beta > hi * (1.0 + kSlack))
        throw std::range_error(range_message("beta", beta, lo, hi));
    beta = std::clamp(beta, lo, hi);
    const std::size_t nodes = betas.size();
    if (nodes == 1) return along_gamma(0, gamma);

    std::vector<double> lb(nodes), v(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        lb[i] = std::log(betas[i]);
        v[i] = along_gamma(i, gamma);
    }
    const double x = std::clamp(std::log(beta), lb.front(), lb.back());
    if (nodes >= 4) return Pchip(std::move(lb), std::move(v))(x);
    auto it = std::upper_bound(lb.begin(), lb.end(), x);
    if (it == lb.end()) return v.back();
    const std::size_t j = static_cast<std::size_t>(it - lb.begin());
    const double w = (x - lb[j - 1]) / (lb[j] - lb[j - 1]);
    return (1.0 - w) * v[j - 1] + w * v[j];
}

bool EtaTable::covers(double beta_lo, double beta_hi) const {
    return !betas.empty() && beta_lo >= betas.front() * (1.0 - kSlack) && beta_hi <= betas.back() * (1.0 + kSlack);
}

EtaFunction EtaTable::function() const {
    return [table = *this](double beta, double gamma) { return table(beta, gamma); };
}

std::string EtaTable::to_json() const {
    nlohmann::json j;
    j["kind"] = "vanspec-eta-table";
    j["d"] = d;
    j["n"] = n;
    j["trials"] = trials;
    j["seed"] = seed;
    j["beta"] = betas;
    j["m"] = columns;
    j["gamma"] = gammas;
    j["eta"] = values;
    return j.dump(1);
}

EtaTable EtaTable::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.value("kind", "") != "vanspec-eta-table") throw std::invalid_argument("not an eta table file");
    EtaTable t;
    t.d = j.at("d").get<int>();
    t.n = j.at("n").get<int>();
    t.trials = j.at("trials").get<int>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.betas = j.at("beta").get<std::vector<double>>();
    t.columns = j.at("m").get<std::vector<int>>();
    t.gammas = j.at("gamma").get<std::vector<double>>();
    t.values = j.at("eta").get<std::vector<std::vector<double>>>();
    t.finalize();
    return t;
}

void EtaTable::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write eta table to " + path);
    out << to_json() << '\n';
}

EtaTable EtaTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read eta table " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

double eta_mixture(const DensityOfDensity& gx, double support_measure, double beta, double gamma,
                   const EtaFunction& eta_u, double tol) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
    if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    if (gamma == 0.0) return 1.0;
    auto h = [&](double y) { return eta_u(beta / y, gamma * y); };
    const double mixed = integrate_against_gx(gx, h, tol);
    return 1.0 - support_measure + support_measure * mixed;
}

double asymptotic_mse(const DensityOfDensity& gx, double support_measure, double beta, double gamma,
                      const EtaFunction& eta_u) {
    return eta_mixture(gx, support_measure, beta, gamma / beta, eta_u);
}

std::pair<double, double> mixture_beta_range(const DensityOfDensity& gx, double beta_lo, double beta_hi) {
    const auto [ylo, yhi] = gx_support(gx);
    if (!(ylo > 0.0)) throw std::invalid_argument("g_x support must stay away from zero");
    return {beta_lo / yhi, beta_hi / ylo};
}

}  // namespace vanspec
