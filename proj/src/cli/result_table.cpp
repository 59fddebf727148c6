#include "vanspec/cli/result_table.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace vanspec::cli {

namespace {

constexpr std::string_view kConfigPrefix = "# config: ";

std::string quote(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char ch : cell) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

void ResultTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        throw std::logic_error(fmt::format("row has {} cells, table '{}' has {} columns", cells.size(), name,
                                           columns.size()));
    rows.push_back(std::move(cells));
}

void ResultTable::add_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    add_row(std::move(cells));
}

std::string render_csv(const ResultTable& table, const Json& config) {
    std::ostringstream os;
    os << "# vanspec " << kVersion << '\n';
    os << "# command: " << config.at("command").get<std::string>() << '\n';
    os << "# seed: " << config.at("seed").get<std::uint64_t>() << '\n';
    os << "# config_hash: fnv1a64:" << config_hash(config) << '\n';
    os << kConfigPrefix << config.dump() << '\n';
    if (!table.name.empty()) os << "# table: " << table.name << '\n';
    for (const auto& [key, value] : table.notes) os << "# " << key << ": " << value << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << quote(table.columns[c]);
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << quote(row[c]);
        os << '\n';
    }
    return os.str();
}

Json read_config_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind('#', 0) != 0) break;
        if (line.rfind(kConfigPrefix, 0) == 0) {
            try {
                return Json::parse(line.substr(kConfigPrefix.size()));
            } catch (const Json::exception& e) {
                throw UsageError("'" + path + "' has an unreadable config line: " + e.what());
            }
        }
    }
    throw UsageError("'" + path + "' has no '# config:' metadata line");
}

}  // namespace vanspec::cli
