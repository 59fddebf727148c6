#include "vanspec/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "vanspec/moments.hpp"
#include "vanspec/partitions.hpp"
#include "vanspec/reconstruct.hpp"
#include "vanspec/scenarios.hpp"
#include "vanspec/spectrum.hpp"
#include "vanspec/vandermonde.hpp"

namespace vanspec::cli {

namespace {

// Sub-stream of the master seed reserved for the eta_u table.
constexpr std::uint64_t kEtaStream = 0xE7A;

using Fn = RunResult (*)(const Json&, const RunContext&);

std::uint64_t seed_of(const Json& c) { return c.at("seed").get<std::uint64_t>(); }

std::vector<double> doubles(const Json& c, const char* key) { return c.at(key).get<std::vector<double>>(); }

int columns_for(int rows, double beta) { return std::max(1, static_cast<int>(std::lround(rows / beta))); }

std::string label_db(double db) { return format_number(db) + "dB"; }

Series step_series(std::string label, const Histogram& h, bool dashed = false) {
    return {std::move(label), h.edges, h.density, dashed, true};
}

void add_histogram_rows(ResultTable& t, const Histogram& h, const std::vector<std::string>& prefix = {}) {
    for (std::size_t b = 0; b < h.bins(); ++b) {
        auto row = prefix;
        row.push_back(format_number(h.edges[b]));
        row.push_back(format_number(h.edges[b + 1]));
        row.push_back(format_number(h.density[b]));
        t.add_row(std::move(row));
    }
}

RunResult run_partitions(const Json& c, const RunContext&) {
    const int p = c.at("p").get<int>(), k = c.at("k").get<int>();
    const auto method = c.at("method") == "shortcut" ? CoefficientMethod::NoncrossingShortcut
                                                     : CoefficientMethod::ExtrapolatedCount;
    RunResult r;
    ResultTable t;
    t.columns = {"partition", "k", "noncrossing", "v_exact", "v"};
    t.note("method", c.at("method").get<std::string>());
    for (const auto& coef : coefficient_table(p, method)) {
        const int blocks = coef.partition.blocks();
        if (k > 0 && blocks != k) continue;
        t.add_row({coef.partition.to_string(), std::to_string(blocks), is_noncrossing(coef.partition) ? "1" : "0",
                   coef.exact_value.str(), format_number(coef.value)});
        if (coef.used_even_fallback) t.note("even_fallback", coef.partition.to_string());
    }
    r.tables.push_back(std::move(t));
    return r;
}

RunResult run_moments(const Json& c, const RunContext&) {
    const int d = c.at("d"), n = c.at("n"), max_p = c.at("max_p"), trials = c.at("trials");
    const double beta = c.at("beta");
    const auto dist = make_distribution(c.at("dist"), d);
    const int m = columns_for(row_count(n, d), beta);
    const auto analytic = moment_table(dist, d, beta, max_p);
    const auto mc = empirical_trace_moments(dist, n, m, trials, seed_of(c), max_p);

    RunResult r;
    ResultTable t;
    t.columns = {"p", "M_analytic", "M_montecarlo", "rel_err"};
    t.note("m", std::to_string(m));
    t.note("beta_realized", static_cast<double>(row_count(n, d)) / m);
    t.note("integral_method", to_string(analytic.method));
    std::vector<std::string> se;
    for (double v : mc.std_err) se.push_back(format_number(v));
    t.note("mc_stderr", fmt::format("{}", fmt::join(se, " ")));
    Plot plot{"Asymptotic vs Monte Carlo moments", "p", "M_p", true, {}};
    Series a{"analytic", {}, {}}, b{"Monte Carlo", {}, {}, true};
    for (int p = 1; p <= max_p; ++p) {
        const double an = analytic.moments[p - 1], emp = mc.mean[p - 1];
        t.add_row(std::vector<double>{static_cast<double>(p), an, emp, std::abs(emp - an) / an});
        a.x.push_back(p);
        a.y.push_back(an);
        b.x.push_back(p);
        b.y.push_back(emp);
    }
    plot.series = {a, b};
    r.tables.push_back(std::move(t));
    r.plots.emplace_back("", std::move(plot));
    return r;
}

RunResult run_spectrum(const Json& c, const RunContext&) {
    const int d = c.at("d"), n = c.at("n"), trials = c.at("trials"), bins = c.at("bins");
    const double beta = c.at("beta");
    const auto dist = make_distribution(c.at("dist"), d);
    const int m = columns_for(row_count(n, d), beta);
    const auto s = aesd(dist, n, m, trials, seed_of(c), bins);

    RunResult r;
    ResultTable t;
    t.columns = {"bin_left", "bin_right", "density"};
    t.note("atom_mass", s.atom_zero_mass);
    t.note("eigenvalues", std::to_string(s.eigenvalue_count));
    t.note("m", std::to_string(m));
    t.note("beta_realized", s.beta());
    add_histogram_rows(t, s.histogram);
    r.tables.push_back(std::move(t));
    r.plots.emplace_back("", Plot{fmt::format("AESD, n = {}, beta = {}", n, format_number(s.beta())), "z",
                                  "density", false, {step_series(dist.id, s.histogram)}});
    r.summary.push_back(fmt::format("atom mass {:.4f} over {} eigenvalues", s.atom_zero_mass, s.eigenvalue_count));
    return r;
}

// beta -> realized (m, beta) pairs for a sweep.
std::vector<std::pair<int, double>> realize(const std::vector<double>& betas, int rows) {
    std::vector<std::pair<int, double>> out;
    for (double b : betas) {
        const int m = columns_for(rows, b);
        out.emplace_back(m, static_cast<double>(rows) / m);
    }
    return out;
}

std::vector<double> to_linear(const std::vector<double>& db) {
    std::vector<double> out;
    for (double g : db) out.push_back(db_to_linear(g));
    return out;
}

RunResult run_mse(const Json& c, const RunContext& ctx) {
    const int d = c.at("d"), n = c.at("n"), trials = c.at("trials");
    const auto dist = make_distribution(c.at("dist"), d);
    const auto betas = doubles(c, "beta"), gdb = doubles(c, "gamma_db");
    const auto gammas = to_linear(gdb);
    const auto real = realize(betas, row_count(n, d));
    double lo = real.front().second, hi = lo;
    for (const auto& [m, b] : real) {
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    const auto [elo, ehi] = mixture_beta_range(dist.gx, lo, hi);
    const auto table = obtain_eta_table(d, n, elo, ehi, c.at("eta_trials"), c.at("eta_nodes"),
                                        derive_seed(seed_of(c), kEtaStream), ctx);
    const auto eta = table.function();

    RunResult r;
    ResultTable t;
    t.columns = {"beta", "gamma_db", "mse_mc", "mse_trace", "mse_asymptotic", "stderr"};
    Plot plot{"MSE vs SNR (" + dist.id + ")", "gamma [dB]", "MSE", true, {}};
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const auto [m, br] = real[i];
        t.note(fmt::format("beta {}", format_number(betas[i])), fmt::format("m = {}, realized {}", m, format_number(br)));
        const auto est = mse_monte_carlo(dist, n, m, gammas, trials, derive_seed(seed_of(c), i));
        Series mc{"MC beta=" + format_number(betas[i]), gdb, {}}, as{"asym beta=" + format_number(betas[i]), gdb, {}, true};
        for (std::size_t g = 0; g < gammas.size(); ++g) {
            const double a = asymptotic_mse(dist.gx, dist.support_measure, br, gammas[g], eta);
            t.add_row(std::vector<double>{betas[i], gdb[g], est[g].mean_error, est[g].mean_trace, a, est[g].se_error});
            mc.y.push_back(est[g].mean_error);
            as.y.push_back(a);
        }
        plot.series.push_back(std::move(mc));
        plot.series.push_back(std::move(as));
    }
    r.tables.push_back(std::move(t));
    r.plots.emplace_back("", std::move(plot));
    return r;
}

// Shared by the fading and CSMA scenarios: uniform reference against the
// thinned law, asymptotic curves plus optional direct Monte Carlo.
RunResult scenario_sweep(const Json& c, const RunContext& ctx, const SamplingDistribution& dist,
                         const std::string& kind, bool plot_against_beta) {
    const int n = c.at("n"), trials = c.at("trials");
    const auto betas = doubles(c, "beta"), gdb = doubles(c, "gamma_db");
    const auto gammas = to_linear(gdb);
    const auto real = realize(betas, row_count(n, 2));
    double lo = real.front().second, hi = lo;
    for (const auto& [m, b] : real) {
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    const auto [elo, ehi] = mixture_beta_range(dist.gx, lo, hi);
    const auto table = obtain_eta_table(2, n, std::min(elo, lo), std::max(ehi, hi), c.at("eta_trials"),
                                        c.at("eta_nodes"), derive_seed(seed_of(c), kEtaStream), ctx);
    const auto eta = table.function();
    const auto uniform = uniform_distribution(2);

    ResultTable t;
    t.columns = {"beta", "gamma_db", "mse_uniform", "mse_" + kind};
    if (trials > 0)
        t.columns.insert(t.columns.end(), {"mse_uniform_mc", "mse_" + kind + "_mc", "stderr_uniform", "stderr_" + kind});

    // cells[i][g] = row values
    std::vector<std::vector<std::vector<double>>> cells(betas.size());
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const auto [m, br] = real[i];
        t.note(fmt::format("beta {}", format_number(betas[i])), fmt::format("m = {}, realized {}", m, format_number(br)));
        std::vector<MseEstimate> mu, mx;
        if (trials > 0) {
            mu = mse_monte_carlo(uniform, n, m, gammas, trials, derive_seed(seed_of(c), 2 * i));
            mx = mse_monte_carlo(dist, n, m, gammas, trials, derive_seed(seed_of(c), 2 * i + 1));
        }
        for (std::size_t g = 0; g < gammas.size(); ++g) {
            std::vector<double> row{betas[i], gdb[g], eta(br, gammas[g] / br),
                                    asymptotic_mse(dist.gx, dist.support_measure, br, gammas[g], eta)};
            if (trials > 0) {
                row.push_back(mu[g].mean_error);
                row.push_back(mx[g].mean_error);
                row.push_back(mu[g].se_error);
                row.push_back(mx[g].se_error);
            }
            cells[i].push_back(row);
            t.add_row(row);
        }
    }

    Plot plot{kind + " vs lossless uniform sampling", plot_against_beta ? "beta" : "gamma [dB]", "MSE", true, {}};
    const std::size_t outer = plot_against_beta ? gammas.size() : betas.size();
    const std::size_t inner = plot_against_beta ? betas.size() : gammas.size();
    for (std::size_t o = 0; o < outer; ++o) {
        const std::string tag =
            plot_against_beta ? "gamma=" + label_db(gdb[o]) : "beta=" + format_number(betas[o]);
        Series su{"uniform " + tag, {}, {}}, sx{kind + " " + tag, {}, {}, true};
        for (std::size_t k = 0; k < inner; ++k) {
            const auto& row = plot_against_beta ? cells[k][o] : cells[o][k];
            const double x = plot_against_beta ? row[0] : row[1];
            su.x.push_back(x);
            sx.x.push_back(x);
            su.y.push_back(row[2]);
            sx.y.push_back(row[3]);
        }
        plot.series.push_back(std::move(su));
        plot.series.push_back(std::move(sx));
    }
    RunResult r;
    r.tables.push_back(std::move(t));
    r.plots.emplace_back("", std::move(plot));
    return r;
}

RunResult run_fading(const Json& c, const RunContext& ctx) {
    return scenario_sweep(c, ctx, fading_distribution(c.at("a_db").get<double>()), "fading", false);
}

RunResult run_csma(const Json& c, const RunContext& ctx) {
    const auto hier = make_hierarchy(c.at("dist"));
    const auto prof = csma_success_profile(hier);
    auto r = scenario_sweep(c, ctx, prof.distribution, "csma", true);
    auto& t = r.tables.front();
    t.note("collision", hier.collision_label());
    for (std::size_t i = 0; i < hier.areas.size(); ++i) {
        std::vector<std::string> pc;
        for (double v : prof.p_collision[i]) pc.push_back(fmt::format("{:.6g}", v));
        t.note(fmt::format("area {}", i + 1),
               fmt::format("|A| = {}, lambda1 = {}, P_c = [{}], P_s = {:.6g}, p_s = {:.6g}",
                           format_number(hier.areas[i]), format_number(hier.lambda1[i]), fmt::join(pc, " "),
                           prof.p_success[i], prof.p_normalized[i]));
        r.summary.push_back(fmt::format("area {}: end-to-end success {:.4f}, normalized density {:.4f}", i + 1,
                                        prof.p_success[i], prof.p_normalized[i]));
    }
    return r;
}

RunResult run_holes(const Json& c, const RunContext&) {
    const int d = c.at("d"), n = c.at("n"), trials = c.at("trials"), bins = c.at("bins");
    const double cov = c.at("c"), beta = c.at("beta");
    const int m = columns_for(row_count(n, d), beta);
    const int m_base = std::max(1, static_cast<int>(std::lround(m / cov)));
    const auto direct = aesd(hole_distribution(cov, d), n, m, trials, seed_of(c), bins);
    const auto base = aesd(uniform_distribution(d), n, m_base, trials, derive_seed(seed_of(c), 1), bins);
    const auto moved = transform_scaled_lsd(base, cov);
    const double ks = ks_distance(direct.positive, moved.positive);

    RunResult r;
    for (const auto* s : {&direct, &moved}) {
        ResultTable t;
        t.name = s == &direct ? "direct" : "transformed";
        t.columns = {"bin_left", "bin_right", "density"};
        t.note("atom_mass", s->atom_zero_mass);
        t.note("atom_mass_predicted", 1.0 - cov);
        t.note("ks_positive", ks);
        t.note("m", std::to_string(s == &direct ? m : m_base));
        add_histogram_rows(t, s->histogram);
        r.tables.push_back(std::move(t));
    }
    r.plots.emplace_back("", Plot{fmt::format("Scaled support c = {}, beta = {}", format_number(cov), format_number(beta)),
                                  "z", "density", false,
                                  {step_series("direct", direct.histogram),
                                   step_series("transformed uniform", moved.histogram, true)}});
    r.summary.push_back(fmt::format("KS (positive parts) = {:.4f}; atom mass direct {:.4f}, transformed {:.4f}, 1-c {:.4f}",
                                    ks, direct.atom_zero_mass, moved.atom_zero_mass, 1.0 - cov));
    return r;
}

RunResult run_dense(const Json& c, const RunContext&) {
    const int n = c.at("n"), trials = c.at("trials"), bins = c.at("bins");
    const double a_db = c.at("a_db");
    const auto betas = doubles(c, "beta");
    const auto dist = fading_distribution(a_db);
    const auto gx = fading_gx(db_to_linear(a_db));

    RunResult r;
    ResultTable spectra;
    spectra.name = "aesd";
    spectra.columns = {"beta", "bin_left", "bin_right", "density"};
    Plot plot{fmt::format("Dense limit, fading a = {} dB", format_number(a_db)), "z", "density", false, {}};
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const int m = columns_for(row_count(n, 2), betas[i]);
        const auto s = aesd(dist, n, m, trials, derive_seed(seed_of(c), i), bins);
        const double l1 = l1_distance(s.histogram, dist.gx);
        spectra.note(fmt::format("beta {}", format_number(betas[i])),
                     fmt::format("m = {}, atom_mass = {}, l1_to_gx = {}", m, format_number(s.atom_zero_mass),
                                 format_number(l1)));
        add_histogram_rows(spectra, s.histogram, {format_number(betas[i])});
        plot.series.push_back(step_series("AESD beta=" + format_number(betas[i]), s.histogram, true));
        r.summary.push_back(fmt::format("beta {}: L1(AESD, g_x) = {:.4f}", format_number(betas[i]), l1));
    }
    ResultTable density;
    density.name = "gx";
    density.columns = {"y", "g_x"};
    Series curve{"g_x", {}, {}};
    const int points = 400;
    for (int k = 0; k <= points; ++k) {
        const double y = gx.lo + (gx.hi - gx.lo) * k / points;
        const double g = gx.pdf(y);
        density.add_row(std::vector<double>{y, g});
        curve.x.push_back(y);
        curve.y.push_back(g);
    }
    plot.series.push_back(std::move(curve));
    r.tables.push_back(std::move(spectra));
    r.tables.push_back(std::move(density));
    r.plots.emplace_back("", std::move(plot));
    return r;
}

RunResult run_gx(const Json& c, const RunContext&) {
    const auto levels = doubles(c, "a_db");
    const int points = c.at("points");
    std::vector<ClosedFormGx> curves;
    double top = 0.0;
    for (double a_db : levels) {
        curves.push_back(fading_gx(db_to_linear(a_db)));
        top = std::max(top, curves.back().hi);
    }
    ResultTable t;
    t.columns = {"y"};
    for (double a_db : levels) t.columns.push_back("g_" + label_db(a_db));
    for (double a_db : levels) t.columns.push_back("G_" + label_db(a_db));
    Plot plot{"Density of the density under fading", "y", "g_x(y)", false, {}};
    for (double a_db : levels) plot.series.push_back({"a = " + label_db(a_db), {}, {}});
    for (int k = 0; k <= points; ++k) {
        const double y = top * k / points;
        std::vector<double> row{y};
        for (std::size_t i = 0; i < curves.size(); ++i) {
            const double g = gx_pdf(curves[i], y);
            row.push_back(g);
            plot.series[i].x.push_back(y);
            plot.series[i].y.push_back(g);
        }
        for (const auto& g : curves) row.push_back(y <= g.lo ? 0.0 : (y >= g.hi ? 1.0 : g.cdf(y)));
        t.add_row(row);
    }
    RunResult r;
    r.tables.push_back(std::move(t));
    r.plots.emplace_back("", std::move(plot));
    return r;
}

Fn dispatch(const std::string& command) {
    if (command == "partitions") return run_partitions;
    if (command == "moments") return run_moments;
    if (command == "spectrum") return run_spectrum;
    if (command == "mse") return run_mse;
    if (command == "scenario.fading") return run_fading;
    if (command == "scenario.csma") return run_csma;
    if (command == "scenario.holes") return run_holes;
    if (command == "scenario.dense") return run_dense;
    if (command == "scenario.gx") return run_gx;
    throw UsageError("unknown command '" + command + "'");
}

std::string sibling(const std::string& path, const std::string& name, const std::string& ext) {
    const std::filesystem::path p(path);
    const std::string stem = (p.parent_path() / p.stem()).string();
    return name.empty() ? stem + ext : stem + "_" + name + ext;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

RunResult run(const Json& config, const RunContext& ctx) {
    validate_config(config);
    return dispatch(config.at("command").get<std::string>())(config, ctx);
}

std::vector<std::string> write_outputs(const RunResult& result, const Json& config, const std::string& out,
                                       const std::string& svg) {
    std::vector<std::string> written;
    const bool several = result.tables.size() > 1;
    for (const auto& t : result.tables) {
        const std::string text = render_csv(t, config);
        if (out.empty()) {
            std::cout << text;
            if (several) std::cout << '\n';
            continue;
        }
        const std::string ext = std::filesystem::path(out).extension().string();
        const std::string path = several ? sibling(out, t.name, ext.empty() ? ".csv" : ext) : out;
        write_file(path, text);
        written.push_back(path);
    }
    if (!svg.empty()) {
        for (const auto& [name, plot] : result.plots) {
            const std::string path = result.plots.size() > 1 ? sibling(svg, name, ".svg") : svg;
            write_file(path, render_svg(plot));
            written.push_back(path);
        }
    }
    return written;
}

EtaTable obtain_eta_table(int d, int n, double beta_lo, double beta_hi, int trials, int nodes, std::uint64_t seed,
                          const RunContext& ctx) {
    const auto grid = EtaTable::covering_grid(d, beta_lo, beta_hi, n, nodes);
    if (!ctx.eta_table_path.empty() && std::filesystem::exists(ctx.eta_table_path)) {
        try {
            auto cached = EtaTable::load(ctx.eta_table_path);
            if (cached.d == d && cached.n == n && cached.trials == trials && cached.seed == seed &&
                cached.columns == EtaTable::node_columns(d, n, grid) && cached.gammas == EtaTable::default_gammas())
                return cached;
            std::cerr << "vanspec: eta table '" << ctx.eta_table_path << "' was built for another sweep; rebuilding\n";
        } catch (const std::exception& e) {
            std::cerr << "vanspec: ignoring unreadable eta table '" << ctx.eta_table_path << "': " << e.what() << '\n';
        }
    }
    auto table = EtaTable::build(d, grid, EtaTable::default_gammas(), n, trials, seed);
    if (!ctx.eta_table_path.empty()) table.save(ctx.eta_table_path);
    return table;
}

}  // namespace vanspec::cli
