#pragma once

// Test-only oracle: exhaustive search for the best multi-threshold policy by
// exact renewal evaluation. Enumerates non-increasing tau vectors (allowing
// entries lifted above the feasibility envelope i+d-1, which represent
// "switch whenever feasible" prefixes) and keeps the best effective policy.
// Independent of the MDP solver and of the extraction path it is used to
// check.

#include <algorithm>
#include <set>
#include <vector>

#include "aoisched/core_types.hpp"
#include "aoisched/renewal.hpp"

namespace aoisched::testing {

struct SearchBest {
    double avg_per_slot = 0.0;
    ThresholdPolicy policy;                 // a monotone representative
    std::vector<int> effective;             // min(tau_i, i+d-1)
};

inline std::vector<int> effective_thresholds(const ThresholdPolicy& tp) {
    std::vector<int> eff(tp.tau.size());
    for (std::size_t i = 0; i < tp.tau.size(); ++i)
        eff[i] = std::min(tp.tau[i], static_cast<int>(i) + tp.params.d);
    return eff;
}

inline SearchBest brute_force_best_threshold(double p, int d, int k_max, int lift = 3) {
    Params params(p, d);
    SearchBest best;
    best.policy = ThresholdPolicy::myopic(params);
    best.avg_per_slot = eval_threshold_exact(best.policy, p, d, 40).avg_aoi_per_slot();
    best.effective = {};

    std::set<std::vector<int>> seen;
    std::vector<int> tau;
    auto consider = [&](const std::vector<int>& t) {
        ThresholdPolicy tp{params, static_cast<int>(t.size()), t};
        std::vector<int> eff = effective_thresholds(tp);
        if (!seen.insert(eff).second) return;
        double v = eval_threshold_exact(tp, p, d, 40).avg_aoi_per_slot();
        if (v < best.avg_per_slot) {
            best.avg_per_slot = v;
            best.policy = tp;
            best.effective = eff;
        }
    };
    // depth-first over non-increasing tau with i < tau_i <= min(prev, i+d-1+lift)
    auto rec = [&](auto&& self, int i, int prev) -> void {
        if (i > k_max) return;
        int hi = std::min(prev, i + d - 1 + lift);
        for (int ti = hi; ti > i; --ti) {
            tau.push_back(ti);
            consider(tau);
            self(self, i + 1, ti);
            tau.pop_back();
        }
    };
    rec(rec, 1, 1 << 20);
    return best;
}

}  // namespace aoisched::testing
