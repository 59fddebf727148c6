#include <chrono>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "vanspec/cli/commands.hpp"
#include "vanspec/parallel.hpp"

using namespace vanspec;
using namespace vanspec::cli;

namespace {

constexpr const char* kGammaHelp =
    "SNR grid in dB: start:step:stop (inclusive) or a comma list; converted internally to gamma = 10^(dB/10)";

struct Common {
    std::uint64_t seed = 42;
    int threads = 0;
    std::string eta_table;
    std::string out;
    std::string svg;
    std::string out_dir = ".";
};

struct Sweep {
    std::string beta;
    std::string gamma_db;
    int n = 0;
    int trials = 100;
    int eta_trials = 40;
    int eta_nodes = 24;
};

void add_sweep_options(CLI::App* sub, Sweep& s, const char* beta_default, const char* gamma_default, int n_default) {
    s.beta = beta_default;
    s.gamma_db = gamma_default;
    s.n = n_default;
    sub->add_option("--beta", s.beta, "aspect ratios n^d/m, comma list")->capture_default_str();
    sub->add_option("--gamma-db", s.gamma_db, kGammaHelp)->capture_default_str();
    if (n_default > 0)
        sub->add_option("--n", s.n, "harmonics per dimension")->capture_default_str();
    else
        sub->add_option("--n", s.n, "harmonics per dimension (default 100 for d=1, 10 for d=2)");
    sub->add_option("--trials", s.trials, "Monte Carlo trials per beta (0 skips the direct simulation)")
        ->capture_default_str();
    sub->add_option("--eta-trials", s.eta_trials, "trials per node of the eta_u table")->capture_default_str();
    sub->add_option("--eta-nodes", s.eta_nodes, "beta nodes of the eta_u table")->capture_default_str();
}

void put_sweep(Json& c, const Sweep& s) {
    c["beta"] = parse_positive_list(s.beta, "beta");
    c["gamma_db"] = parse_gamma_db(s.gamma_db);
    c["n"] = s.n;
    c["trials"] = s.trials;
    c["eta_trials"] = s.eta_trials;
    c["eta_nodes"] = s.eta_nodes;
}

int execute(const Json& config, const Common& opt, const std::string& out, const std::string& svg) {
    const auto start = std::chrono::steady_clock::now();
    const auto result = run(config, RunContext{opt.eta_table});
    const auto written = write_outputs(result, config, out, svg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // Progress and timing go to stderr so CSV bytes never depend on them.
    for (const auto& line : result.summary) std::cerr << line << '\n';
    for (const auto& path : written) std::cerr << "wrote " << path << '\n';
    std::cerr << "wall time " << secs << " s, " << thread_count() << " threads\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vanspec: spectra of random d-fold Vandermonde matrices and field reconstruction from irregular "
                 "samples"};
    app.require_subcommand(1);
    app.fallthrough();
    Common opt;
    app.add_option("--seed", opt.seed, "master seed")->capture_default_str();
    app.add_option("--threads", opt.threads, "worker threads (default: available parallelism)");
    app.add_option("--eta-table", opt.eta_table,
                   "eta_u table cache (JSON); reused when it matches the sweep, rebuilt and saved otherwise");

    Json config;
    std::string dist_arg = "uniform";
    int d = 1, n = 0, trials = 0, p = 4, k = 0, max_p = 5;
    double beta = 0.8, cov = 0.8, a_db = 5.0;
    std::string bins = "auto", method = "extrapolated", hier_path, beta_list, a_list = "0,5,10";
    int figure = 6, points = 400;

    auto* part = app.add_subcommand("partitions", "set partitions of {1..p} with their Vandermonde coefficients");
    part->add_option("--p", p, "ground set size (1..7)")->capture_default_str();
    part->add_option("--k", k, "only partitions with k blocks (0 = all)")->capture_default_str();
    part->add_option("--method", method, "extrapolated (exact lattice-count fit) or shortcut (noncrossing -> 1)")
        ->capture_default_str();
    part->add_option("--out", opt.out, "CSV path (stdout when omitted)");

    auto* mom = app.add_subcommand("moments", "asymptotic moments against Monte Carlo trace moments");
    mom->add_option("--dist", dist_arg, "JSON file or uniform, fading:<a_db>, hole:<c>, csma:6|7|<file>")
        ->capture_default_str();
    mom->add_option("--d", d, "dimension")->capture_default_str();
    mom->add_option("--beta", beta, "aspect ratio")->capture_default_str();
    mom->add_option("--max-p", max_p, "largest moment order (<= 7)")->capture_default_str();
    mom->add_option("--n", n, "harmonics per dimension for the Monte Carlo (default 100 for d=1, 10 for d=2)");
    mom->add_option("--trials", trials, "Monte Carlo trials (default 100)");
    mom->add_option("--out", opt.out, "CSV path (stdout when omitted)");
    mom->add_option("--svg", opt.svg, "SVG plot path");

    auto* spec = app.add_subcommand("spectrum", "average empirical spectral distribution of V V^H");
    spec->add_option("--dist", dist_arg, "JSON file or uniform, fading:<a_db>, hole:<c>, csma:6|7|<file>")
        ->capture_default_str();
    spec->add_option("--d", d, "dimension")->capture_default_str();
    spec->add_option("--n", n, "harmonics per dimension (default 100 for d=1, 10 for d=2)");
    spec->add_option("--beta", beta, "aspect ratio")->capture_default_str();
    spec->add_option("--trials", trials, "independent matrices (default 50)");
    spec->add_option("--bins", bins, "histogram bins or auto (Freedman-Diaconis)")->capture_default_str();
    spec->add_option("--out", opt.out, "CSV path (stdout when omitted)");
    spec->add_option("--svg", opt.svg, "SVG plot path");

    Sweep mse_sweep;
    auto* mse = app.add_subcommand("mse", "LMMSE reconstruction error: Monte Carlo, trace form and asymptotic");
    mse->add_option("--dist", dist_arg, "JSON file or uniform, fading:<a_db>, hole:<c>, csma:6|7|<file>")
        ->capture_default_str();
    mse->add_option("--d", d, "dimension")->capture_default_str();
    add_sweep_options(mse, mse_sweep, "0.2,0.4,0.6,0.8", "-10:2:30", 0);
    mse->add_option("--out", opt.out, "CSV path (stdout when omitted)");
    mse->add_option("--svg", opt.svg, "SVG plot path");

    auto* scen = app.add_subcommand("scenario", "network scenarios");
    scen->require_subcommand(1);
    Sweep fade_sweep, csma_sweep;
    auto* fade = scen->add_subcommand("fading", "Rayleigh fading toward a central sink against lossless sampling");
    fade->add_option("--a-db", a_db, "fading exponent a in dB")->capture_default_str();
    add_sweep_options(fade, fade_sweep, "0.2,0.4,0.6,0.8", "-10:2:30", 10);
    fade->add_option("--out", opt.out, "CSV path (stdout when omitted)");
    fade->add_option("--svg", opt.svg, "SVG plot path");

    auto* csma = scen->add_subcommand("csma", "hierarchical CSMA collection against lossless sampling");
    csma->add_option("--config", hier_path, "hierarchy JSON {L, H, areas[], m[[i][h]], lambda1[], collision}");
    csma->add_option("--figure", figure, "reference hierarchy 6 or 7 when --config is absent")->capture_default_str();
    add_sweep_options(csma, csma_sweep, "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1", "0,10,20", 10);
    csma->add_option("--out", opt.out, "CSV path (stdout when omitted)");
    csma->add_option("--svg", opt.svg, "SVG plot path");

    auto* holes = scen->add_subcommand("holes", "coverage hole: direct AESD against the transformed uniform AESD");
    holes->add_option("--c", cov, "covered fraction of the cube")->capture_default_str();
    holes->add_option("--beta", beta, "aspect ratio")->capture_default_str();
    holes->add_option("--n", n, "harmonics per dimension (default 100 for d=1, 10 for d=2)");
    holes->add_option("--d", d, "dimension")->capture_default_str();
    holes->add_option("--trials", trials, "independent matrices (default 50)");
    holes->add_option("--bins", bins, "histogram bins or auto")->capture_default_str();
    holes->add_option("--out", opt.out, "CSV stem; writes <stem>_direct.csv and <stem>_transformed.csv");
    holes->add_option("--svg", opt.svg, "SVG plot path");

    auto* dense = scen->add_subcommand("dense", "AESD against g_x as beta shrinks (fading)");
    dense->add_option("--a-db", a_db, "fading exponent a in dB")->capture_default_str();
    dense->add_option("--beta", beta_list, "aspect ratios, comma list (default 0.5,0.1,0.01)");
    dense->add_option("--n", n, "harmonics per dimension (default 10)");
    dense->add_option("--trials", trials, "independent matrices per beta (default 20)");
    dense->add_option("--bins", bins, "histogram bins or auto")->capture_default_str();
    dense->add_option("--out", opt.out, "CSV stem; writes <stem>_aesd.csv and <stem>_gx.csv");
    dense->add_option("--svg", opt.svg, "SVG plot path");

    auto* gx = scen->add_subcommand("gx", "density of the density under fading for several a");
    gx->add_option("--a-db", a_list, "fading exponents in dB, comma list")->capture_default_str();
    gx->add_option("--points", points, "grid points")->capture_default_str();
    gx->add_option("--out", opt.out, "CSV path (stdout when omitted)");
    gx->add_option("--svg", opt.svg, "SVG plot path");

    std::vector<std::string> figures;
    auto* repro = app.add_subcommand("reproduce", "canned desk-scale figure runs (CSV + SVG)");
    repro->add_option("figures", figures, "fig1a fig1b fig2 fig3 fig5 fig6 fig7, or all")->required();
    repro->add_option("--out-dir", opt.out_dir, "output directory")->capture_default_str();

    std::string rerun_path;
    auto* rerun = app.add_subcommand("rerun", "re-run the config recorded in a CSV's metadata block");
    rerun->add_option("csv", rerun_path, "CSV written by vanspec")->required()->check(CLI::ExistingFile);
    rerun->add_option("--out", opt.out, "CSV path (stdout when omitted)");
    rerun->add_option("--svg", opt.svg, "SVG plot path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (opt.threads < 0) throw UsageError("--threads must be >= 0");
        set_thread_count(opt.threads);
        auto bins_value = [&] {
            if (bins == "auto") return 0;
            try {
                return std::stoi(bins);
            } catch (const std::exception&) {
                throw UsageError("--bins must be a count or auto");
            }
        };
        auto fill_n = [&](int fallback_trials) {
            config["n"] = n > 0 ? n : default_n(d);
            config["trials"] = trials > 0 ? trials : fallback_trials;
        };
        config["seed"] = opt.seed;

        if (*part) {
            config["command"] = "partitions";
            config["p"] = p;
            config["k"] = k;
            config["method"] = method;
        } else if (*mom) {
            config["command"] = "moments";
            config["dist"] = parse_distribution(dist_arg);
            config["d"] = d;
            config["beta"] = beta;
            config["max_p"] = max_p;
            fill_n(100);
        } else if (*spec) {
            config["command"] = "spectrum";
            config["dist"] = parse_distribution(dist_arg);
            config["d"] = d;
            config["beta"] = beta;
            config["bins"] = bins_value();
            fill_n(50);
        } else if (*mse) {
            config["command"] = "mse";
            config["dist"] = parse_distribution(dist_arg);
            config["d"] = d;
            if (mse_sweep.n == 0) mse_sweep.n = default_n(d);
            put_sweep(config, mse_sweep);
        } else if (*fade) {
            config["command"] = "scenario.fading";
            config["a_db"] = a_db;
            put_sweep(config, fade_sweep);
        } else if (*csma) {
            config["command"] = "scenario.csma";
            config["dist"] = hier_path.empty() ? csma_spec_from_figure(figure) : csma_spec_from_file(hier_path);
            put_sweep(config, csma_sweep);
        } else if (*holes) {
            config["command"] = "scenario.holes";
            config["c"] = cov;
            config["beta"] = beta;
            config["d"] = d;
            config["bins"] = bins_value();
            fill_n(50);
        } else if (*dense) {
            config["command"] = "scenario.dense";
            config["a_db"] = a_db;
            config["beta"] = parse_positive_list(beta_list.empty() ? "0.5,0.1,0.01" : beta_list, "beta");
            config["n"] = n > 0 ? n : 10;
            config["trials"] = trials > 0 ? trials : 20;
            config["bins"] = bins_value();
        } else if (*gx) {
            config["command"] = "scenario.gx";
            config["a_db"] = parse_increasing_list(a_list, "a-db");
            config["points"] = points;
        } else if (*repro) {
            std::vector<std::string> ids;
            for (const auto& f : figures) {
                if (f == "all") ids.insert(ids.end(), figure_ids().begin(), figure_ids().end());
                else ids.push_back(f);
            }
            std::vector<Json> configs;
            for (const auto& id : ids) configs.push_back(reproduce_config(id, opt.seed));
            for (const auto& c : configs) validate_config(c);
            std::filesystem::create_directories(opt.out_dir);
            for (std::size_t i = 0; i < ids.size(); ++i) {
                const auto base = (std::filesystem::path(opt.out_dir) / ids[i]).string();
                std::cerr << "== " << ids[i] << '\n';
                execute(configs[i], opt, base + ".csv", base + ".svg");
            }
            return 0;
        } else if (*rerun) {
            config = read_config_from_csv(rerun_path);
        }
        validate_config(config);
        return execute(config, opt, opt.out, opt.svg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "vanspec: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "vanspec: bad config: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "vanspec: " << e.what() << '\n';
        return 1;
    }
}
