#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vanspec/cli/config.hpp"
#include "vanspec/cli/result_table.hpp"
#include "vanspec/cli/svg.hpp"
#include "vanspec/eta.hpp"

namespace vanspec::cli {

struct RunContext {
    /// Cache file for the eta_u table; empty keeps the table in memory only.
    std::string eta_table_path;
};

struct RunResult {
    std::vector<ResultTable> tables;
    std::vector<std::pair<std::string, Plot>> plots;  // (name, plot)
    std::vector<std::string> summary;                 // one-line findings for stdout
};

/// Runs a validated config.  The result depends only on the config: the
/// thread count and the eta cache never change a number.
RunResult run(const Json& config, const RunContext& ctx = {});

/// Writes every table (and, when `svg` is non-empty, every plot).  One table
/// goes to `out`; several go to <stem>_<name><ext>.  An empty `out` prints the
/// CSV text to stdout.  Returns the paths written.
std::vector<std::string> write_outputs(const RunResult& result, const Json& config, const std::string& out,
                                       const std::string& svg);

/// The eta_u table a sweep needs, reusing `ctx.eta_table_path` when it holds
/// exactly the table this config would build, and refreshing it otherwise.
EtaTable obtain_eta_table(int d, int n, double beta_lo, double beta_hi, int trials, int nodes, std::uint64_t seed,
                          const RunContext& ctx);

/// Canned configuration of a figure id (fig1a, fig1b, fig2, fig3, fig5, fig6, fig7).
Json reproduce_config(const std::string& figure, std::uint64_t seed);
const std::vector<std::string>& figure_ids();

}  // namespace vanspec::cli
