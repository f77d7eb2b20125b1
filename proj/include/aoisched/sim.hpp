#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "aoisched/core_types.hpp"
#include "aoisched/policies.hpp"

namespace aoisched {

/// splitmix64: the per-slot arrival generator and the seed-derivation mixer.
/// Chosen for bit-reproducible streams independent of the C++ standard
/// library implementation.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 g(seed ^ (0x632be59bd9b4e019ULL + stream));
        g.next();
        return g.next();
    }
};

struct SimConfig {
    Params params;                    // delta_m only matters for TABULAR lookups
    long long horizon_T = 1000000;
    std::uint64_t seed = 1;
    long long epoch_cap = 1000000;    // censors runaway epochs; must exceed d
};

/// Monte Carlo outcome. avg_aoi is R(T)/T under the per-slot convention
/// (each slot contributes the post-action instantaneous AoI, d on completion
/// slots), so it is directly comparable to the MDP avg_cost. The per-epoch
/// area moments back the ratio-estimator standard error.
struct SimReport {
    double avg_aoi = 0.0;
    long long n_epochs = 0;
    double emp_mean_x = 0.0;
    double emp_mean_x2 = 0.0;
    long long censored = 0;
    double emp_mean_r = 0.0;
    double emp_mean_rx = 0.0;
    double emp_mean_r2 = 0.0;

    /// Delta-method standard error of the renewal-reward ratio estimate.
    double stderr_avg_aoi() const;
};

/// Simulates the source-link-destination system slot by slot under any
/// policy. Deterministic for a fixed (policy, config); one arrival draw per
/// slot, so runs with equal seeds share the arrival sample path (common
/// random numbers). Epochs longer than epoch_cap are counted as censored and
/// excluded from the empirical moments; the dynamics are not altered.
SimReport simulate(const Policy& policy, const SimConfig& cfg);

struct SweepRow {
    double p = 0.0;
    std::string policy;
    double avg_aoi = 0.0;
    double gap_vs_myopic = 0.0;
    long long n_epochs = 0;
    long long censored = 0;
};

struct SweepConfig {
    std::vector<std::string> policies = {"myopic", "optimal"};
    std::vector<double> p_grid;
    int d = 2;
    long long T = 1000000;     // 0 = exact evaluations only
    std::uint64_t seed = 1;
    int jobs = 1;
    double tol = 1e-9;
    int delta_m = 0;           // 0 = per-point default heuristic
    long long epoch_cap = 1000000;
};

/// For each grid point: solves the MDP (for the "optimal" entry), evaluates
/// exactly where an exact evaluator exists (closed form for myopic, renewal
/// enumeration for threshold policies) and simulates with common random
/// numbers (rows suffixed ":sim") when T > 0. Gap is myopic minus policy
/// within the same evaluation method. Solver failures mark the affected
/// cells with NaN instead of aborting the sweep. Cells run on up to `jobs`
/// threads, each with a seed derived from (seed, grid index); output order
/// is independent of scheduling.
std::vector<SweepRow> sweep(const SweepConfig& cfg);

/// Pinned schema: p,policy,avg_aoi,gap_vs_myopic,n_epochs,censored.
/// `manifest_line`, when non-empty, is written first as a "# ..." comment.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::string& manifest_line = "");

}  // namespace aoisched
