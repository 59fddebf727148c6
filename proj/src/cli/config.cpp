#include "vanspec/cli/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "vanspec/partitions.hpp"
#include "vanspec/vandermonde.hpp"

namespace vanspec::cli {

namespace {

double parse_number(const std::string& token, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw UsageError(fmt::format("{}: '{}' is not a number", what, token));
    }
    if (used != token.size() || !std::isfinite(v)) throw UsageError(fmt::format("{}: '{}' is not a number", what, token));
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, sep)) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
    }
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw UsageError("'" + path + "' is not valid JSON: " + e.what());
    }
}

Json canonical_hierarchy(const ClusterHierarchy& h) { return Json::parse(h.to_json()); }

const Json& field(const Json& c, const char* key) {
    if (!c.contains(key)) throw UsageError(fmt::format("config is missing '{}'", key));
    return c.at(key);
}

int int_in(const Json& c, const char* key, int lo, int hi) {
    const auto& v = field(c, key);
    if (!v.is_number_integer()) throw UsageError(fmt::format("'{}' must be an integer", key));
    const auto x = v.get<long long>();
    if (x < lo || x > hi) throw UsageError(fmt::format("'{}' = {} outside [{}, {}]", key, x, lo, hi));
    return static_cast<int>(x);
}

double positive(const Json& c, const char* key) {
    const auto& v = field(c, key);
    if (!v.is_number() || !(v.get<double>() > 0.0)) throw UsageError(fmt::format("'{}' must be > 0", key));
    return v.get<double>();
}

double number(const Json& c, const char* key) {
    const auto& v = field(c, key);
    if (!v.is_number()) throw UsageError(fmt::format("'{}' must be a number", key));
    return v.get<double>();
}

std::vector<double> positive_list(const Json& c, const char* key) {
    const auto& v = field(c, key);
    if (!v.is_array() || v.empty()) throw UsageError(fmt::format("'{}' must be a non-empty list", key));
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number() || !(x.get<double>() > 0.0)) throw UsageError(fmt::format("'{}' entries must be > 0", key));
        out.push_back(x.get<double>());
    }
    return out;
}

void increasing_list(const Json& c, const char* key) {
    const auto& v = field(c, key);
    if (!v.is_array() || v.empty()) throw UsageError(fmt::format("'{}' must be a non-empty list", key));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw UsageError(fmt::format("'{}' entries must be numbers", key));
        if (i > 0 && !(v[i].get<double>() > v[i - 1].get<double>()))
            throw UsageError(fmt::format("'{}' must be strictly increasing", key));
    }
}

void check_rows(int n, int d) {
    try {
        row_count(n, d);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

void check_distribution(const Json& c, int d) {
    try {
        make_distribution(field(c, "dist"), d);
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(std::string("distribution: ") + e.what());
    }
}

}  // namespace

std::vector<double> parse_gamma_db(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) throw UsageError("gamma range must read start:step:stop");
        const double a = parse_number(parts[0], "gamma-db"), s = parse_number(parts[1], "gamma-db"),
                     b = parse_number(parts[2], "gamma-db");
        if (!(s > 0.0) || b < a) throw UsageError("gamma range needs step > 0 and stop >= start");
        const auto count = static_cast<long>(std::floor((b - a) / s + 1e-9)) + 1;
        if (count > 10000) throw UsageError("gamma range has more than 10000 points");
        // Multiply rather than accumulate so the grid does not drift.
        for (long i = 0; i < count; ++i) out.push_back(a + s * static_cast<double>(i));
        return out;
    }
    return parse_increasing_list(text, "gamma-db");
}

std::vector<double> parse_increasing_list(const std::string& text, const char* what) {
    std::vector<double> out;
    for (const auto& t : split(text, ',')) out.push_back(parse_number(t, what));
    if (out.empty()) throw UsageError(fmt::format("{} list is empty", what));
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i] > out[i - 1])) throw UsageError(fmt::format("{} values must be strictly increasing", what));
    return out;
}

std::vector<double> parse_positive_list(const std::string& text, const char* what) {
    std::vector<double> out;
    for (const auto& t : split(text, ',')) {
        const double v = parse_number(t, what);
        if (!(v > 0.0)) throw UsageError(fmt::format("{} values must be > 0", what));
        out.push_back(v);
    }
    if (out.empty()) throw UsageError(fmt::format("{} list is empty", what));
    return out;
}

Json csma_spec_from_file(const std::string& path) {
    auto j = read_json_file(path);
    if (j.contains("hierarchy")) j = j["hierarchy"];
    try {
        return {{"type", "csma"}, {"hierarchy", canonical_hierarchy(ClusterHierarchy::from_json(j.dump()))}};
    } catch (const Json::exception& e) {
        throw UsageError("hierarchy '" + path + "': " + e.what());
    }
}

Json csma_spec_from_figure(int figure) {
    try {
        return {{"type", "csma"}, {"hierarchy", canonical_hierarchy(reference_hierarchy(figure))}};
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

Json parse_distribution(const std::string& arg) {
    if (std::filesystem::is_regular_file(arg)) {
        const auto j = read_json_file(arg);
        if (j.contains("areas")) return csma_spec_from_file(arg);
        if (!j.contains("type")) throw UsageError("'" + arg + "' needs a \"type\" field");
        const auto type = j["type"].get<std::string>();
        if (type == "csma") {
            if (j.contains("figure")) return csma_spec_from_figure(j["figure"].get<int>());
            return csma_spec_from_file(arg);
        }
        Json spec = {{"type", type}};
        if (type == "fading") spec["a_db"] = j.at("a_db").get<double>();
        else if (type == "hole") spec["c"] = j.at("c").get<double>();
        else if (type != "uniform") throw UsageError("unknown distribution type '" + type + "'");
        return spec;
    }
    const auto colon = arg.find(':');
    const std::string kind = arg.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : arg.substr(colon + 1);
    if (kind == "uniform" && rest.empty()) return {{"type", "uniform"}};
    if (kind == "fading" && !rest.empty()) return {{"type", "fading"}, {"a_db", parse_number(rest, "fading")}};
    if (kind == "hole" && !rest.empty()) return {{"type", "hole"}, {"c", parse_number(rest, "hole")}};
    if (kind == "csma" && !rest.empty()) {
        if (rest == "6" || rest == "fig6") return csma_spec_from_figure(6);
        if (rest == "7" || rest == "fig7") return csma_spec_from_figure(7);
        return csma_spec_from_file(rest);
    }
    throw UsageError("unknown distribution '" + arg +
                     "' (expected a JSON file, uniform, fading:<a_db>, hole:<c>, csma:6, csma:7 or csma:<file>)");
}

SamplingDistribution make_distribution(const Json& spec, int d) {
    const auto type = spec.at("type").get<std::string>();
    if (type == "uniform") return uniform_distribution(d);
    if (type == "hole") return hole_distribution(spec.at("c").get<double>(), d);
    if (type == "fading" || type == "csma") {
        if (d != 2) throw UsageError(type + " sampling is defined on the unit square; use --d 2");
        if (type == "fading") return fading_distribution(spec.at("a_db").get<double>());
        return csma_success_profile(make_hierarchy(spec)).distribution;
    }
    throw UsageError("unknown distribution type '" + type + "'");
}

ClusterHierarchy make_hierarchy(const Json& spec) {
    if (spec.value("type", "") != "csma") throw UsageError("expected a csma distribution");
    return ClusterHierarchy::from_json(spec.at("hierarchy").dump());
}

int default_n(int d) {
    if (d == 1) return 100;
    if (d == 2) return 10;
    int n = 1;
    while (std::pow(n + 1, d) <= 256.0) ++n;
    return n;
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash(const Json& config) { return fmt::format("{:016x}", fnv1a64(config.dump())); }

void validate_config(const Json& c) {
    const auto command = field(c, "command").get<std::string>();
    if (!field(c, "seed").is_number_unsigned()) throw UsageError("'seed' must be a non-negative integer");

    if (command == "partitions") {
        const int p = int_in(c, "p", 1, kMaxPartitionSize);
        int_in(c, "k", 0, p);
        const auto method = field(c, "method").get<std::string>();
        if (method != "extrapolated" && method != "shortcut")
            throw UsageError("method must be extrapolated or shortcut");
        return;
    }
    if (command == "moments" || command == "spectrum" || command == "mse") {
        const int d = int_in(c, "d", 1, 10);
        const int n = int_in(c, "n", 1, kMaxRows);
        check_rows(n, d);
        int_in(c, "trials", 1, 1000000);
        check_distribution(c, d);
        if (command == "mse") {
            positive_list(c, "beta");
            increasing_list(c, "gamma_db");
            int_in(c, "eta_trials", 1, 1000000);
            int_in(c, "eta_nodes", 2, 1000);
        } else {
            positive(c, "beta");
        }
        if (command == "moments") int_in(c, "max_p", 1, kMaxPartitionSize);
        if (command == "spectrum") int_in(c, "bins", 0, 100000);
        return;
    }
    if (command == "scenario.fading" || command == "scenario.csma") {
        const int n = int_in(c, "n", 1, kMaxRows);
        check_rows(n, 2);
        int_in(c, "trials", 0, 1000000);
        positive_list(c, "beta");
        increasing_list(c, "gamma_db");
        int_in(c, "eta_trials", 1, 1000000);
        int_in(c, "eta_nodes", 2, 1000);
        if (command == "scenario.fading") number(c, "a_db");
        else check_distribution(c, 2);
        return;
    }
    if (command == "scenario.holes") {
        const double cov = positive(c, "c");
        if (cov > 1.0) throw UsageError("'c' must lie in (0, 1]");
        const int d = int_in(c, "d", 1, 10);
        check_rows(int_in(c, "n", 1, kMaxRows), d);
        positive(c, "beta");
        int_in(c, "trials", 1, 1000000);
        int_in(c, "bins", 0, 100000);
        return;
    }
    if (command == "scenario.dense") {
        number(c, "a_db");
        check_rows(int_in(c, "n", 1, kMaxRows), 2);
        positive_list(c, "beta");
        int_in(c, "trials", 1, 1000000);
        int_in(c, "bins", 0, 100000);
        return;
    }
    if (command == "scenario.gx") {
        increasing_list(c, "a_db");
        int_in(c, "points", 2, 1000000);
        return;
    }
    throw UsageError("unknown command '" + command + "'");
}

}  // namespace vanspec::cli
