#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vanspec/cli/config.hpp"

namespace vanspec::cli {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// One CSV table.  `name` tells tables of a multi-table command apart and
/// becomes the file suffix; `notes` are extra '#' lines after the metadata.
struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> notes;

    void add_row(std::vector<std::string> cells);
    void add_row(const std::vector<double>& values);
    void note(std::string key, std::string value) { notes.emplace_back(std::move(key), std::move(value)); }
    void note(std::string key, double value) { notes.emplace_back(std::move(key), format_number(value)); }
};

/// Metadata block (version, command, seed, config hash, canonical config,
/// table name, notes) followed by the header row and the body.  Wall time is
/// deliberately absent so reruns are byte-identical.
std::string render_csv(const ResultTable& table, const Json& config);

/// Reads the "# config:" line of a CSV written by render_csv.
Json read_config_from_csv(const std::string& path);

}  // namespace vanspec::cli
