#include <fmt/format.h>

#include "vanspec/cli/commands.hpp"

namespace vanspec::cli {

namespace {

constexpr int kEtaTrials = 40;
constexpr int kEtaNodes = 24;

Json base(const std::string& figure, const std::string& command, std::uint64_t seed) {
    return {{"command", command}, {"figure", figure}, {"seed", seed}};
}

std::vector<double> steps(double start, double step, double stop) {
    std::vector<double> out;
    for (int i = 0; start + step * i <= stop + 1e-9 * step; ++i) out.push_back(start + step * i);
    return out;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"fig1a", "fig1b", "fig2", "fig3", "fig5", "fig6", "fig7"};
    return ids;
}

Json reproduce_config(const std::string& figure, std::uint64_t seed) {
    if (figure == "fig1a" || figure == "fig1b") {
        auto c = base(figure, "scenario.holes", seed);
        c["c"] = figure == "fig1a" ? 0.8 : 0.5;
        c["beta"] = figure == "fig1a" ? 0.8 : 0.2;
        c["n"] = 100;
        c["d"] = 1;
        c["trials"] = 50;
        c["bins"] = 0;
        return c;
    }
    if (figure == "fig2") {
        auto c = base(figure, "scenario.gx", seed);
        c["a_db"] = {0.0, 5.0, 10.0};
        c["points"] = 400;
        return c;
    }
    if (figure == "fig3") {
        auto c = base(figure, "scenario.fading", seed);
        c["a_db"] = 5.0;
        c["beta"] = {0.2, 0.4, 0.6, 0.8};
        c["gamma_db"] = steps(-10.0, 2.0, 30.0);
        c["n"] = 10;
        c["trials"] = 100;
        c["eta_trials"] = kEtaTrials;
        c["eta_nodes"] = kEtaNodes;
        return c;
    }
    if (figure == "fig5") {
        auto c = base(figure, "scenario.dense", seed);
        c["a_db"] = 5.0;
        c["beta"] = {0.5, 0.1, 0.01};
        c["n"] = 10;
        c["trials"] = 20;
        c["bins"] = 0;
        return c;
    }
    if (figure == "fig6" || figure == "fig7") {
        auto c = base(figure, "scenario.csma", seed);
        c["dist"] = csma_spec_from_figure(figure == "fig6" ? 6 : 7);
        c["beta"] = steps(0.1, 0.1, 1.0);
        c["gamma_db"] = {0.0, 10.0, 20.0};
        c["n"] = 10;
        c["trials"] = 100;
        c["eta_trials"] = kEtaTrials;
        c["eta_nodes"] = kEtaNodes;
        return c;
    }
    throw UsageError(fmt::format("unknown figure '{}' (expected one of fig1a, fig1b, fig2, fig3, fig5, fig6, fig7)",
                                 figure));
}

}  // namespace vanspec::cli
