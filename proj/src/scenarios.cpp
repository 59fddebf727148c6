#include "vanspec/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace vanspec {

using std::numbers::pi;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }

double fading_b(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("fading exponent a must be > 0");
    const double e = std::erf(std::sqrt(a / 4.0));
    return a / (pi * e * e);
}

ClosedFormGx fading_gx(double a) {
    const double b = fading_b(a);
    const double y_mid = b * std::exp(-a / 4.0);
    const double lo = b * std::exp(-a / 2.0);
    ClosedFormGx g;
    g.lo = lo;
    g.hi = b;
    g.breakpoints = {y_mid};
    auto radius2 = [a, b](double y) { return std::log(b / y) / a; };
    g.pdf = [=](double y) {
        if (y < lo || y >= b) return 0.0;
        if (y >= y_mid) return pi / (a * y);
        const double r = std::sqrt(radius2(y));
        return (pi - 4.0 * std::acos(std::min(1.0, 1.0 / (2.0 * r)))) / (a * y);
    };
    g.cdf = [=](double y) {
        if (y < lo) return 0.0;
        if (y >= b) return 1.0;
        const double r2 = radius2(y);
        if (y >= y_mid) return 1.0 - pi * r2;
        const double r = std::sqrt(r2);
        const double v = 1.0 - std::sqrt(std::max(0.0, 4.0 * r2 - 1.0)) -
                         r2 * (pi - 4.0 * std::acos(std::min(1.0, 1.0 / (2.0 * r))));
        return std::max(0.0, v);
    };
    return g;
}

SamplingDistribution fading_distribution(double a_db) {
    const double a = db_to_linear(a_db);
    const double b = fading_b(a);
    SamplingDistribution dist;
    dist.dim = 2;
    std::ostringstream id;
    id << "fading-a" << a_db << "dB";
    dist.id = id.str();
    dist.support_measure = 1.0;
    dist.density = [a, b](std::span<const double> z) {
        if (z[0] < -0.5 || z[0] >= 0.5 || z[1] < -0.5 || z[1] >= 0.5) return 0.0;
        return b * std::exp(-a * (z[0] * z[0] + z[1] * z[1]));
    };
    // Rejection from the uniform deployment doubles as the thinning simulation.
    dist.draw = [a](Rng& rng, std::span<double> out) {
        std::uniform_real_distribution<double> u(-0.5, 0.5), accept(0.0, 1.0);
        for (;;) {
            const double z1 = u(rng), z2 = u(rng);
            if (accept(rng) < std::exp(-a * (z1 * z1 + z2 * z2))) {
                out[0] = z1;
                out[1] = z2;
                return;
            }
        }
    };
    dist.gx = fading_gx(a);
    dist.power_integral = [a, b](int k) {
        const double e = std::erf(std::sqrt(k * a / 4.0));
        return std::pow(b, k) * pi / (k * a) * e * e;
    };
    return dist;
}

double fading_mse(double a_db, double beta, double gamma, const EtaFunction& eta_u) {
    const DensityOfDensity g = fading_gx(db_to_linear(a_db));
    return asymptotic_mse(g, 1.0, beta, gamma, eta_u);
}

SamplingDistribution hole_distribution(double c, int d) { return scaled_uniform_distribution(c, d); }

double default_collision_model(double m_nodes, double load, const CollisionParams& params) {
    if (m_nodes < 1.0) throw std::invalid_argument("a cluster needs at least one node");
    if (load < 0.0) throw std::invalid_argument("offered load must be >= 0");
    if (m_nodes <= 1.0 || load == 0.0) return 0.0;
    const double q = std::min(1.0, load * params.slot_duration * params.backoff_factor);
    return 1.0 - std::pow(1.0 - q, params.vulnerability_slots * (m_nodes - 1.0));
}

void ClusterHierarchy::validate() const {
    const std::size_t L = areas.size();
    if (L == 0) throw std::invalid_argument("hierarchy needs at least one area");
    if (m.size() != L || lambda1.size() != L) throw std::invalid_argument("areas, m and lambda1 must have L entries");
    const double total = std::accumulate(areas.begin(), areas.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("area measures must sum to 1");
    const std::size_t H = m.front().size();
    if (H == 0) throw std::invalid_argument("hierarchy needs at least one layer");
    for (std::size_t i = 0; i < L; ++i) {
        if (!(areas[i] > 0.0)) throw std::invalid_argument("area measures must be > 0");
        if (m[i].size() != H) throw std::invalid_argument("every area needs the same layer count");
        for (double v : m[i])
            if (v < 1.0) throw std::invalid_argument("cluster sizes must be >= 1");
        if (lambda1[i] < 0.0) throw std::invalid_argument("loads must be >= 0");
    }
    if (!collision) throw std::invalid_argument("hierarchy has no collision model");
}

ClusterHierarchy ClusterHierarchy::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ClusterHierarchy h;
    h.areas = j.at("areas").get<std::vector<double>>();
    h.m = j.at("m").get<std::vector<std::vector<double>>>();
    h.lambda1 = j.at("lambda1").get<std::vector<double>>();
    if (j.contains("L") && j["L"].get<std::size_t>() != h.areas.size())
        throw std::invalid_argument("L does not match the number of areas");
    if (j.contains("H") && !h.m.empty() && j["H"].get<std::size_t>() != h.m.front().size())
        throw std::invalid_argument("H does not match the layer count of m");
    CollisionParams params;
    std::string type = "slotted";
    if (j.contains("collision")) {
        const auto& c = j["collision"];
        type = c.value("type", "slotted");
        if (c.contains("params")) {
            const auto& p = c["params"];
            params.slot_duration = p.value("slot_duration", params.slot_duration);
            params.backoff_factor = p.value("backoff_factor", params.backoff_factor);
            params.vulnerability_slots = p.value("vulnerability_slots", params.vulnerability_slots);
        }
    }
    if (type == "slotted") {
        h.collision = [params](double mn, double load) { return default_collision_model(mn, load, params); };
    } else if (type == "none") {
        h.collision = [](double, double) { return 0.0; };
    } else {
        throw std::invalid_argument("unknown collision model '" + type + "' (expected slotted or none)");
    }
    h.collision_type = type;
    h.collision_params = params;
    h.validate();
    return h;
}

std::string ClusterHierarchy::collision_label() const {
    std::ostringstream label;
    label << collision_type;
    if (collision_type == "slotted")
        label << "(slot=" << collision_params.slot_duration << ",backoff=" << collision_params.backoff_factor
              << ",v=" << collision_params.vulnerability_slots << ")";
    return label.str();
}

std::string ClusterHierarchy::to_json() const {
    nlohmann::json j;
    j["L"] = areas.size();
    j["H"] = layers();
    j["areas"] = areas;
    j["m"] = m;
    j["lambda1"] = lambda1;
    j["collision"]["type"] = collision_type;
    if (collision_type == "slotted")
        j["collision"]["params"] = {{"slot_duration", collision_params.slot_duration},
                                    {"backoff_factor", collision_params.backoff_factor},
                                    {"vulnerability_slots", collision_params.vulnerability_slots}};
    return j.dump();
}

ClusterHierarchy reference_hierarchy(int figure) {
    ClusterHierarchy h;
    h.areas.assign(4, 0.25);
    h.m.assign(4, {100.0, 30.0, 4.0});
    if (figure == 6) h.lambda1 = {1e-3, 2e-4, 2e-4, 2e-5};
    else if (figure == 7) h.lambda1 = {5e-3, 1e-3, 1e-3, 1e-4};
    else throw std::invalid_argument("reference hierarchies exist for figures 6 and 7");
    const CollisionParams params;
    h.collision = [params](double mn, double load) { return default_collision_model(mn, load, params); };
    h.collision_params = params;
    return h;
}

CsmaProfile csma_success_profile(const ClusterHierarchy& hier) {
    hier.validate();
    const std::size_t L = hier.areas.size();
    const std::size_t H = static_cast<std::size_t>(hier.layers());
    CsmaProfile p;
    p.load.assign(L, std::vector<double>(H));
    p.p_collision = p.load;
    p.p_success_layer = p.load;
    p.p_success.assign(L, 1.0);
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t h = 0; h < H; ++h) {
            p.load[i][h] = (h == 0) ? hier.lambda1[i]
                                    : hier.m[i][h - 1] * p.load[i][h - 1] * (1.0 - p.p_collision[i][h - 1]);
            const double pc = hier.collision(hier.m[i][h], p.load[i][h]);
            if (!(pc >= 0.0 && pc < 1.0)) {
                std::ostringstream os;
                os << "collision model returned P_c = " << pc << " for area " << i + 1 << ", layer " << h + 1
                   << " (m = " << hier.m[i][h] << ", load = " << p.load[i][h] << "); need 0 <= P_c < 1";
                throw std::invalid_argument(os.str());
            }
            p.p_collision[i][h] = pc;
            p.p_success_layer[i][h] = 1.0 - pc;
            p.p_success[i] *= 1.0 - pc;
        }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < L; ++i) norm += hier.areas[i] * p.p_success[i];
    for (std::size_t i = 0; i < L; ++i) p.p_normalized.push_back(p.p_success[i] / norm);
    p.distribution = strip_distribution(hier.areas, p.p_normalized, "csma");
    return p;
}

DenseLimit dense_limit(const SamplingDistribution& dist) {
    DenseLimit out;
    out.lsd = dist.gx;
    out.atom_mass = 1.0 - dist.support_measure;
    out.mse_floor = 1.0 - dist.support_measure;
    return out;
}

double ScenarioModel::predicted_mse(double beta, double gamma, const EtaFunction& eta_u) const {
    return asymptotic_mse(distribution.gx, distribution.support_measure, beta, gamma, eta_u);
}

std::pair<double, double> ScenarioModel::eta_beta_range(double beta_lo, double beta_hi) const {
    return mixture_beta_range(distribution.gx, beta_lo, beta_hi);
}

ScenarioModel fading_scenario(double a_db) { return {"fading", fading_distribution(a_db)}; }

ScenarioModel csma_scenario(const ClusterHierarchy& hier) { return {"csma", csma_success_profile(hier).distribution}; }

ScenarioModel hole_scenario(double c, int d) { return {"hole", hole_distribution(c, d)}; }

ScenarioModel uniform_scenario(int d) { return {"uniform", uniform_distribution(d)}; }

}  // namespace vanspec
