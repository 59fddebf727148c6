#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vanspec/eta.hpp"
#include "vanspec/sampling.hpp"

namespace vanspec {

double db_to_linear(double db);
double linear_to_db(double x);

// Rayleigh fading: a point at distance r from the sink is delivered with
// probability e^{-a r^2}, so the delivered density is b e^{-a r^2} on H.

/// b with b^{-1} = (pi / a) erf^2(sqrt(a / 4)); `a` linear.
double fading_b(double a);

/// g_x of the fading density on [b e^{-a/2}, b); `a` linear.
ClosedFormGx fading_gx(double a);

/// d = 2 fading density with rejection sampler; `a_db` in dB.
SamplingDistribution fading_distribution(double a_db);

/// MSE_inf = int g_x(y) eta_u(beta / y, gamma y / beta) dy (|A| = 1).
double fading_mse(double a_db, double beta, double gamma, const EtaFunction& eta_u);

/// Coverage hole: uniform on a centred cube of measure c, empty elsewhere.
SamplingDistribution hole_distribution(double c, int d = 1);

struct CollisionParams {
    double slot_duration = (32.0 + 17.0) * 8.0 / 250000.0;  // payload + PHY/MAC overhead at 250 kb/s
    double backoff_factor = 3.0;
    int vulnerability_slots = 2;
};

/// P_c as a function of (nodes in the cluster, per-node offered load).
using CollisionModel = std::function<double(double m_nodes, double load)>;

/// Slotted contention: q = min(1, load * slot * backoff), P_c = 1 - (1 - q)^{v (m - 1)}.
double default_collision_model(double m_nodes, double load, const CollisionParams& params = {});

struct ClusterHierarchy {
    std::vector<double> areas;              // |A_i|, sum 1
    std::vector<std::vector<double>> m;     // m[i][h], nodes per cluster at layer h in area i
    std::vector<double> lambda1;            // lambda_{i,1}
    CollisionModel collision;
    std::string collision_type = "slotted";  // "custom" when `collision` was set by hand
    CollisionParams collision_params;
    std::string collision_label() const;

    int layers() const { return m.empty() ? 0 : static_cast<int>(m.front().size()); }
    void validate() const;

    /// {L, H, areas[], m[[i][h]], lambda1[], collision: {type, params}}.
    static ClusterHierarchy from_json(const std::string& text);
    std::string to_json() const;
};

/// Four equal areas, three layers, default collision model; loads of the
/// lighter (6) or heavier (7) configuration.
ClusterHierarchy reference_hierarchy(int figure);

struct CsmaProfile {
    std::vector<std::vector<double>> load;        // lambda_{i,h}
    std::vector<std::vector<double>> p_collision; // P_c(i,h)
    std::vector<std::vector<double>> p_success_layer;  // P_s(i,h)
    std::vector<double> p_success;                // P_s(i) = prod_h P_s(i,h)
    std::vector<double> p_normalized;             // p_s(i)
    SamplingDistribution distribution;            // f_x = p_s(i) on strip A_i
};

CsmaProfile csma_success_profile(const ClusterHierarchy& hier);

/// beta -> 0 limit: LSD (1 - |A|) delta + |A| g_x and MSE floor 1 - |A|.
struct DenseLimit {
    DensityOfDensity lsd;
    double atom_mass = 0.0;
    double mse_floor = 0.0;
};

DenseLimit dense_limit(const SamplingDistribution& dist);

/// A sampling distribution together with its predicted MSE_inf.
struct ScenarioModel {
    std::string kind;
    SamplingDistribution distribution;

    double predicted_mse(double beta, double gamma, const EtaFunction& eta_u) const;
    /// Smallest and largest beta' = beta / y queried for betas in [lo, hi].
    std::pair<double, double> eta_beta_range(double beta_lo, double beta_hi) const;
};

ScenarioModel fading_scenario(double a_db);
ScenarioModel csma_scenario(const ClusterHierarchy& hier);
ScenarioModel hole_scenario(double c, int d);
ScenarioModel uniform_scenario(int d);

}  // namespace vanspec
