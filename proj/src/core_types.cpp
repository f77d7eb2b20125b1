#include "aoisched/core_types.hpp"

#include <algorithm>
#include <string>

namespace aoisched {

int Params::default_delta_m(double p, int d) {
    int by_rate = static_cast<int>(std::ceil(4.0 / p)) + d;
    return std::max(10 * d, by_rate);
}

Params::Params(double p_, int d_, int delta_m_) : p(p_), d(d_), delta_m(delta_m_) {
    if (!(p > 0.0) || p > 1.0)
        throw std::invalid_argument("Params: p must satisfy 0 < p <= 1, got " + std::to_string(p));
    if (d < 2)
        throw std::invalid_argument("Params: d must be >= 2, got " + std::to_string(d));
    if (delta_m == 0) delta_m = default_delta_m(p, d);
    if (delta_m <= d)
        throw std::invalid_argument("Params: delta_m must exceed d, got " + std::to_string(delta_m));
}

int Params::state_index(const State& s) const {
    return ((s.delta - d) * d + s.l) * 2 + s.a;
}

State Params::state_at(int index) const {
    State s;
    s.a = index & 1;
    index >>= 1;
    s.l = index % d;
    s.delta = d + index / d;
    return s;
}

std::optional<EpochCoords> epoch_coords(const State& s, const Params& params) {
    if (s.l < 1 || s.delta >= params.delta_m) return std::nullopt;
    EpochCoords c;
    c.j = s.delta - params.d + 1;
    c.i = c.j - s.l;
    if (c.i < 1) return std::nullopt;  // no epoch produces this state
    return c;
}

Action TabularPolicy::action_clamped(State s) const {
    s.delta = std::min(s.delta, params.delta_m);
    return action_of[params.state_index(s)];
}

void ThresholdPolicy::validate() const {
    if (K < 0) throw std::invalid_argument("ThresholdPolicy: K must be >= 0");
    if (static_cast<int>(tau.size()) != K)
        throw std::invalid_argument("ThresholdPolicy: tau must have exactly K entries");
    for (int i = 1; i <= K; ++i) {
        if (tau[i - 1] < i)
            throw std::invalid_argument("ThresholdPolicy: tau_" + std::to_string(i) +
                                        " < " + std::to_string(i));
        if (i > 1 && tau[i - 1] > tau[i - 2])
            throw std::invalid_argument("ThresholdPolicy: tau must be non-increasing");
    }
}

}  // namespace aoisched
