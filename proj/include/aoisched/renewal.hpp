#pragma once

#include "aoisched/core_types.hpp"

namespace aoisched {

/// Exact epoch statistics of a renewal policy. avg_aoi uses the area
/// convention d + E[X^2]/(2 E[X]); the per-slot convention shared with the
/// MDP cost and the simulator is exactly 1/2 lower.
struct EpochStats {
    double mean_x = 0.0;
    double mean_x2 = 0.0;
    double avg_aoi = 0.0;

    double avg_aoi_per_slot() const { return avg_aoi - 0.5; }
};

struct RenewalDiagnostics {
    double total_mass = 0.0;   // geometric tail + all enumerated patterns; = 1 up to rounding
    long long leaves = 0;      // enumerated pattern branches
};

/// Closed-form myopic epoch: X = W + d - 1 with W geometric(p).
EpochStats myopic_closed_form(double p, int d);

/// Exact evaluation of a threshold policy by conditioning on the first
/// arrival slot: the x1 > K tail is closed-form geometric, each x1 <= K
/// enumerates the arrival patterns over slots x1+1..tau_1 (no switch can
/// happen later) and replays the threshold rule. Probabilities accumulate in
/// compensated summation. tau_1 > enum_cap throws std::invalid_argument
/// (2^window blowup; use the simulator instead).
EpochStats eval_threshold_exact(const ThresholdPolicy& tp, double p, int d,
                                int enum_cap = 30, RenewalDiagnostics* diag = nullptr);

}  // namespace aoisched
