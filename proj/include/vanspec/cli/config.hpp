#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vanspec/sampling.hpp"
#include "vanspec/scenarios.hpp"

namespace vanspec::cli {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// Bad flags or config values; the tool exits with status 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// "start:step:stop" (inclusive) or a comma list; values must be strictly increasing.
std::vector<double> parse_gamma_db(const std::string& text);
/// Comma list, strictly increasing.
std::vector<double> parse_increasing_list(const std::string& text, const char* what);
/// Comma list of positive numbers.
std::vector<double> parse_positive_list(const std::string& text, const char* what);

/// Resolves a --dist argument into its canonical JSON object.  Accepts a path
/// to a JSON file or one of: uniform, fading:<a_db>, hole:<c>, csma:6, csma:7,
/// csma:<hierarchy.json>.
Json parse_distribution(const std::string& arg);
/// Canonical {"type": "csma", "hierarchy": {...}} from a hierarchy file or a reference figure.
Json csma_spec_from_file(const std::string& path);
Json csma_spec_from_figure(int figure);

SamplingDistribution make_distribution(const Json& spec, int d);
ClusterHierarchy make_hierarchy(const Json& spec);

/// Desk-scale default: n = 100 for d = 1, n = 10 for d = 2, largest n with n^d <= 256 above.
int default_n(int d);

std::uint64_t fnv1a64(std::string_view text);
std::string config_hash(const Json& config);

/// Checks every numeric range of a config before any computation runs.
void validate_config(const Json& config);

}  // namespace vanspec::cli
