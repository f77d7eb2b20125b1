#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aoisched/core_types.hpp"

namespace aoisched {

/// One outgoing edge of the kernel.
struct Transition {
    State next;
    double prob = 0.0;
};

/// Every (state, legal action) has exactly two successors: arrival / no arrival.
using TransitionPair = std::array<Transition, 2>;

/// Transition kernel of the truncated MDP. delta is clamped to delta_m on
/// entry; l and a out of range or an illegal action (SWITCH with a = 0) throw
/// std::invalid_argument.
TransitionPair transitions(const State& s, Action act, const Params& params);

/// Immediate cost: d on a completing slot (l = d-1 under SKIP), delta + 1
/// otherwise. Unclamped; truncation lives in the kernel only.
double cost(const State& s, Action act, int d);

struct SolveConfig {
    double tol = 1e-9;
    int max_iters = 100000;
    /// Relaxation factor of the value update. 0.5 keeps the iteration
    /// convergent on periodic instances (p = 1); the fixed point, the span
    /// test and the reported drift are those of the undamped operator.
    double damping = 0.5;
    /// Reference state s0; defaults to (d, 0, 0).
    std::optional<State> reference_state;
    bool record_history = false;
};

struct IterStat {
    int iter = 0;
    double span = 0.0;
    double sup = 0.0;
};

struct SolveDiagnostics {
    int iterations = 0;
    double final_span = 0.0;
    double final_sup = 0.0;
    std::vector<IterStat> history;  // filled when cfg.record_history is set
};

class SolveError : public std::runtime_error {
  public:
    SolveError(const std::string& what, double last_span_, int iterations_)
        : std::runtime_error(what), last_span(last_span_), iterations(iterations_) {}
    double last_span = 0.0;
    int iterations = 0;
};

/// Raised when a policy is not threshold-shaped. Offending (i, j) pairs list
/// skips inside a switch run; (i, 0) marks a hole below K; (i, tau_i) marks a
/// genuine monotonicity break.
class ShapeError : public std::runtime_error {
  public:
    ShapeError(const std::string& what, std::vector<std::pair<int, int>> offending_)
        : std::runtime_error(what), offending(std::move(offending_)) {}
    std::vector<std::pair<int, int>> offending;
};

/// Plain relative value iteration: V <- T V - V(s0), span stopping rule,
/// ties broken toward SKIP. avg_cost is the converged drift (T V - V)(s0).
TabularPolicy solve_rvi(const Params& params, const SolveConfig& cfg = {},
                        SolveDiagnostics* diag = nullptr);

/// Same fixed point as solve_rvi, but the per-state minimization is skipped
/// whenever the multi-threshold structure dictates the action within the
/// current sweep (delta ascending, l ascending):
///   a = 0 -> SKIP; SKIP already seen at smaller delta for this l -> SKIP;
///   SWITCH already seen at smaller l >= 1 for this delta -> SWITCH.
/// Returns an action table identical to solve_rvi's.
TabularPolicy solve_structured(const Params& params, const SolveConfig& cfg = {},
                               SolveDiagnostics* diag = nullptr);

/// Independent average-cost oracle: solves the stationary distribution of the
/// chain induced by the policy (direct sparse solve) and returns the exact
/// per-slot average cost. Throws on a singular / reducible system.
double evaluate_stationary(const TabularPolicy& policy);

/// Reads the multi-threshold representation off a solved action table.
/// Raw per-i thresholds are the largest switch slot on each diagonal; capped
/// entries (raw = i+d-1, or cut by the truncation boundary) are lifted by a
/// backward running max so the returned tau is non-increasing. A policy whose
/// switch runs are not contiguous, has holes below K, or needs a lift at an
/// uncapped entry is not threshold-shaped -> ShapeError.
ThresholdPolicy extract_thresholds(const TabularPolicy& policy);

/// Truncation bound large enough that the boundary cost clamp biases the
/// stationary average by less than eps (never below the default heuristic).
int delta_m_for_eval(double p, int d, double eps = 1e-10);

}  // namespace aoisched
