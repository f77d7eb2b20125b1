#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace aoisched {

// Plain value types throughout; treat them as immutable once shared across
// threads.

/// Decision taken by the source in a slot. SKIP continues the unfinished
/// transmission (or idles); at l = d-1 it completes the transmission.
/// SWITCH drops any unfinished update and starts transmitting the new arrival.
enum class Action : std::uint8_t { Skip = 0, Switch = 1 };

struct State;

/// Problem instance: per-slot arrival probability p, transmission length d
/// (slots), and AoI truncation bound delta_m for the approximate MDP.
struct Params {
    double p = 0.5;
    int d = 2;
    int delta_m = 0;

    Params() = default;
    /// delta_m == 0 selects the default heuristic max(10*d, ceil(4/p) + d).
    Params(double p_, int d_, int delta_m_ = 0);

    static int default_delta_m(double p, int d);

    int n_delta() const { return delta_m - d + 1; }
    int n_states() const { return n_delta() * d * 2; }

    /// Dense index of a state: ((delta - d) * d + l) * 2 + a.
    int state_index(const State& s) const;
    State state_at(int index) const;
};

/// MDP state at the beginning of a slot: AoI delta (d <= delta <= delta_m),
/// age of the unfinished update l (0 = idle, else 1..d-1 served slots), and
/// the arrival flag a.
struct State {
    int delta = 0;
    int l = 0;
    int a = 0;

    bool operator==(const State&) const = default;
};

/// Position of an in-service state within a renewal epoch: the in-service
/// update arrived at epoch slot i, the current slot is j (AoI = d + j - 1).
struct EpochCoords {
    int i = 0;
    int j = 0;
    bool operator==(const EpochCoords&) const = default;
};

/// Maps an in-service state to epoch coordinates (i = j - l, j = delta - d + 1).
/// Returns nullopt when the state is idle (l = 0), sits at the truncation
/// boundary (coordinates ambiguous there), or is unreachable within an epoch
/// (i < 1).
std::optional<EpochCoords> epoch_coords(const State& s, const Params& params);

/// Solved policy on the truncated state space, stored dense by state index.
/// avg_cost uses the per-slot accounting convention (the MDP immediate cost
/// summed over a horizon divided by the horizon); the area convention used in
/// renewal identities is exactly 1/2 higher.
struct TabularPolicy {
    Params params;
    std::vector<Action> action_of;
    std::vector<double> value_of;
    double avg_cost = std::numeric_limits<double>::quiet_NaN();

    Action action(const State& s) const { return action_of[params.state_index(s)]; }
    // value_of is empty on tabulated (non-solved) policies
    double value(const State& s) const { return value_of.at(params.state_index(s)); }

    /// Lookup with delta clamped into [d, delta_m]; l and a must be in range.
    Action action_clamped(State s) const;
};

/// Compact multi-threshold policy: switch to an arrival at epoch slot j while
/// transmitting an update that arrived at slot i iff i <= K and j <= tau[i-1].
/// tau is non-increasing with tau[i-1] >= i; K = 0 with empty tau is the
/// myopic never-switch policy.
struct ThresholdPolicy {
    Params params;
    int K = 0;
    std::vector<int> tau;

    static ThresholdPolicy myopic(const Params& params) { return {params, 0, {}}; }

    bool allows_switch(int i, int j) const {
        return i >= 1 && i <= K && j <= tau[static_cast<std::size_t>(i - 1)];
    }

    /// Throws std::invalid_argument if tau is not non-increasing, has the
    /// wrong length, or violates tau_i >= i.
    void validate() const;
};

}  // namespace aoisched
