#include "aoisched/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "aoisched/log.hpp"

namespace aoisched {

namespace {

State validated(State s, const Params& params) {
    s.delta = std::min(s.delta, params.delta_m);  // clamp on entry
    if (s.delta < params.d)
        throw std::invalid_argument("State: delta below d");
    if (s.l < 0 || s.l >= params.d)
        throw std::invalid_argument("State: l out of [0, d-1]");
    if (s.a != 0 && s.a != 1)
        throw std::invalid_argument("State: a must be 0 or 1");
    return s;
}

/// Flattened kernel for the solver inner loop, indexed by state.
struct KernelTables {
    int n = 0;
    double p = 0.0;
    std::vector<double> cost_skip, cost_switch;
    std::vector<int> skip_arr, skip_no;      // successor indices under SKIP
    std::vector<int> switch_arr, switch_no;  // successor indices under SWITCH (a = 1 only)

    explicit KernelTables(const Params& params) {
        n = params.n_states();
        p = params.p;
        cost_skip.resize(n);
        cost_switch.resize(n, 0.0);
        skip_arr.resize(n);
        skip_no.resize(n);
        switch_arr.resize(n, 0);
        switch_no.resize(n, 0);
        for (int idx = 0; idx < n; ++idx) {
            State s = params.state_at(idx);
            auto tr = transitions(s, Action::Skip, params);
            cost_skip[idx] = cost(s, Action::Skip, params.d);
            skip_arr[idx] = params.state_index(tr[0].next);
            skip_no[idx] = params.state_index(tr[1].next);
            if (s.a == 1) {
                auto tw = transitions(s, Action::Switch, params);
                cost_switch[idx] = cost(s, Action::Switch, params.d);
                switch_arr[idx] = params.state_index(tw[0].next);
                switch_no[idx] = params.state_index(tw[1].next);
            }
        }
    }
};

struct SweepResult {
    double span = 0.0;
    double sup = 0.0;
    double drift_ref = 0.0;
};

/// One sweep of the Bellman operator with full minimization at every state.
/// W receives T V - V(s0); actions get the argmin with SKIP tie-break.
SweepResult sweep_plain(const KernelTables& k, const std::vector<double>& V,
                        std::vector<double>& W, std::vector<Action>& act, int ref) {
    const double p = k.p, q = 1.0 - k.p;
    const double refv = V[ref];
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sup = 0.0;
    for (int s = 0; s < k.n; ++s) {
        double v = k.cost_skip[s] + p * V[k.skip_arr[s]] + q * V[k.skip_no[s]];
        Action a = Action::Skip;
        if (s & 1) {
            double w = k.cost_switch[s] + p * V[k.switch_arr[s]] + q * V[k.switch_no[s]];
            if (w < v) {
                v = w;
                a = Action::Switch;
            }
        }
        act[s] = a;
        W[s] = v - refv;
        double diff = W[s] - V[s];
        lo = std::min(lo, diff);
        hi = std::max(hi, diff);
        sup = std::max(sup, std::abs(diff));
    }
    return {hi - lo, sup, W[ref]};  // drift: T V(s0) - V(s0), as V[ref] == refv
}

/// One structured sweep: delta ascending, l ascending. The minimization is
/// skipped where the threshold structure pins the action.
SweepResult sweep_structured(const KernelTables& k, const Params& params,
                             const std::vector<double>& V, std::vector<double>& W,
                             std::vector<Action>& act, int ref,
                             std::vector<char>& skip_seen) {
    const double p = k.p, q = 1.0 - k.p;
    const double refv = V[ref];
    const int d = params.d;
    std::fill(skip_seen.begin(), skip_seen.end(), 0);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sup = 0.0;
    int s = 0;
    for (int di = 0; di < params.n_delta(); ++di) {
        bool switch_below = false;  // SWITCH seen at a smaller l >= 1 for this delta
        for (int l = 0; l < d; ++l) {
            // a = 0: always SKIP
            double v = k.cost_skip[s] + p * V[k.skip_arr[s]] + q * V[k.skip_no[s]];
            act[s] = Action::Skip;
            W[s] = v - refv;
            double diff = W[s] - V[s];
            lo = std::min(lo, diff);
            hi = std::max(hi, diff);
            sup = std::max(sup, std::abs(diff));
            ++s;

            // a = 1
            Action a;
            if (skip_seen[l]) {
                a = Action::Skip;
                v = k.cost_skip[s] + p * V[k.skip_arr[s]] + q * V[k.skip_no[s]];
            } else if (l >= 1 && switch_below) {
                a = Action::Switch;
                v = k.cost_switch[s] + p * V[k.switch_arr[s]] + q * V[k.switch_no[s]];
            } else {
                v = k.cost_skip[s] + p * V[k.skip_arr[s]] + q * V[k.skip_no[s]];
                a = Action::Skip;
                double w = k.cost_switch[s] + p * V[k.switch_arr[s]] + q * V[k.switch_no[s]];
                if (w < v) {
                    v = w;
                    a = Action::Switch;
                }
            }
            act[s] = a;
            if (a == Action::Skip) skip_seen[l] = 1;
            else if (l >= 1) switch_below = true;
            W[s] = v - refv;
            diff = W[s] - V[s];
            lo = std::min(lo, diff);
            hi = std::max(hi, diff);
            sup = std::max(sup, std::abs(diff));
            ++s;
        }
    }
    return {hi - lo, sup, W[ref]};
}

template <typename SweepFn>
TabularPolicy solve_loop(const Params& params, const SolveConfig& cfg, SolveDiagnostics* diag,
                         const char* label, SweepFn do_sweep) {
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("SolveConfig: tol must be > 0");
    if (!(cfg.damping > 0.0) || cfg.damping > 1.0)
        throw std::invalid_argument("SolveConfig: damping must be in (0, 1]");
    KernelTables k(params);
    State s0 = cfg.reference_state.value_or(State{params.d, 0, 0});
    const int ref = params.state_index(validated(s0, params));
    const int n = k.n;
    const double omega = cfg.damping;

    std::vector<double> V(n, 0.0), W(n, 0.0);
    std::vector<Action> act(n, Action::Skip);
    SweepResult last{};
    bool converged = false;
    int iter = 0;
    while (iter < cfg.max_iters) {
        ++iter;
        last = do_sweep(k, V, W, act, ref);
        if (diag && cfg.record_history) diag->history.push_back({iter, last.span, last.sup});
        if (last.span < cfg.tol) {
            converged = true;
            break;
        }
        if (omega == 1.0) {
            V.swap(W);
        } else {
            for (int s = 0; s < n; ++s) V[s] += omega * (W[s] - V[s]);
        }
    }
    if (diag) {
        diag->iterations = iter;
        diag->final_span = last.span;
        diag->final_sup = last.sup;
    }
    if (!converged) {
        std::ostringstream os;
        os << label << ": span " << last.span << " still above tol " << cfg.tol << " after "
           << iter << " iterations (delta_m or tol mis-set?)";
        throw SolveError(os.str(), last.span, iter);
    }
    log_info(label, ": p=", params.p, " d=", params.d, " delta_m=", params.delta_m,
             " converged in ", iter, " sweeps, drift=", last.drift_ref);

    TabularPolicy policy;
    policy.params = params;
    policy.action_of = std::move(act);
    policy.value_of = std::move(W);
    policy.avg_cost = last.drift_ref;
    return policy;
}

}  // namespace

TransitionPair transitions(const State& s_in, Action act, const Params& params) {
    State s = validated(s_in, params);
    if (act == Action::Switch && s.a != 1)
        throw std::invalid_argument("transitions: SWITCH is illegal when a = 0");
    const int up = std::min(s.delta + 1, params.delta_m);
    State arr, no;
    if (act == Action::Switch) {
        arr = {up, 1, 1};
        no = {up, 1, 0};
    } else if (s.l == params.d - 1) {
        arr = {params.d, 0, 1};  // transmission completes, AoI resets to d
        no = {params.d, 0, 0};
    } else {
        const int nl = s.l == 0 ? 0 : s.l + 1;
        arr = {up, nl, 1};
        no = {up, nl, 0};
    }
    return {Transition{arr, params.p}, Transition{no, 1.0 - params.p}};
}

double cost(const State& s, Action act, int d) {
    if (act == Action::Switch && s.a != 1)
        throw std::invalid_argument("cost: SWITCH is illegal when a = 0");
    if (s.l == d - 1 && act == Action::Skip) return static_cast<double>(d);
    return static_cast<double>(s.delta) + 1.0;
}

TabularPolicy solve_rvi(const Params& params, const SolveConfig& cfg, SolveDiagnostics* diag) {
    return solve_loop(params, cfg, diag, "solve_rvi",
                      [](const KernelTables& k, const std::vector<double>& V,
                         std::vector<double>& W, std::vector<Action>& act, int ref) {
                          return sweep_plain(k, V, W, act, ref);
                      });
}

TabularPolicy solve_structured(const Params& params, const SolveConfig& cfg,
                               SolveDiagnostics* diag) {
    std::vector<char> skip_seen(params.d, 0);
    return solve_loop(params, cfg, diag, "solve_structured",
                      [&params, &skip_seen](const KernelTables& k, const std::vector<double>& V,
                                            std::vector<double>& W, std::vector<Action>& act,
                                            int ref) {
                          return sweep_structured(k, params, V, W, act, ref, skip_seen);
                      });
}

double evaluate_stationary(const TabularPolicy& policy) {
    const Params& params = policy.params;
    const int n = params.n_states();
    if (static_cast<int>(policy.action_of.size()) != n)
        throw std::invalid_argument("evaluate_stationary: policy not defined on the full space");

    // pi' (P - I) = 0 with one equation replaced by sum(pi) = 1.
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(3 * static_cast<std::size_t>(n));
    std::vector<double> c(n, 0.0);
    for (int idx = 0; idx < n; ++idx) {
        State s = params.state_at(idx);
        Action a = policy.action_of[idx];
        if (a == Action::Switch && s.a != 1)
            throw std::invalid_argument("evaluate_stationary: illegal SWITCH at a = 0 state");
        c[idx] = cost(s, a, params.d);
        for (const Transition& t : transitions(s, a, params)) {
            int next = params.state_index(t.next);
            if (next != n - 1) trips.emplace_back(next, idx, t.prob);
        }
        if (idx != n - 1) trips.emplace_back(idx, idx, -1.0);
    }
    for (int idx = 0; idx < n; ++idx) trips.emplace_back(n - 1, idx, 1.0);

    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("evaluate_stationary: singular chain (reducible?) - kernel bug");
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b[n - 1] = 1.0;
    Eigen::VectorXd pi = lu.solve(b);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("evaluate_stationary: linear solve failed");

    double mass = 0.0, value = 0.0;
    for (int idx = 0; idx < n; ++idx) {
        double w = std::max(pi[idx], 0.0);  // clip solver noise at transient states
        mass += w;
        value += w * c[idx];
    }
    if (!(mass > 0.0) || !std::isfinite(value))
        throw std::runtime_error("evaluate_stationary: degenerate stationary distribution");
    return value / mass;
}

ThresholdPolicy extract_thresholds(const TabularPolicy& policy) {
    const Params& params = policy.params;
    const int d = params.d;
    const int j_max = params.delta_m - d;  // largest j with delta = d+j-1 below the boundary
    std::vector<std::pair<int, int>> offending;

    // Raw per-i scan along the epoch diagonals.
    std::vector<int> raw;     // raw[i-1] = max switch slot, or i if none
    std::vector<bool> has;    // any switch for this i
    std::vector<bool> capped; // raw hit the feasibility envelope min(i+d-1, j_max)
    for (int i = 1; i + 1 <= j_max; ++i) {
        int hi = std::min(j_max, i + d - 1);
        int top = 0;
        for (int j = i + 1; j <= hi; ++j) {
            State s{d + j - 1, j - i, 1};
            if (policy.action_of[params.state_index(s)] == Action::Switch) top = j;
        }
        raw.push_back(top == 0 ? i : top);
        has.push_back(top != 0);
        capped.push_back(top != 0 && top == hi);
        if (top != 0) {
            for (int j = i + 1; j < top; ++j) {
                State s{d + j - 1, j - i, 1};
                if (policy.action_of[params.state_index(s)] == Action::Skip)
                    offending.emplace_back(i, j);  // skip inside the switch run
            }
        }
    }

    int K = 0;
    for (std::size_t i = 0; i < has.size(); ++i)
        if (has[i]) K = static_cast<int>(i) + 1;
    for (int i = 1; i <= K; ++i)
        if (!has[i - 1]) offending.emplace_back(i, 0);  // hole below K

    auto raise = [](std::vector<std::pair<int, int>> pairs) {
        std::ostringstream os;
        os << "extract_thresholds: policy is not threshold-shaped at (i,j) pairs:";
        for (auto& [i, j] : pairs) os << " (" << i << "," << j << ")";
        os << " (insufficient delta_m or a solver bug?)";
        throw ShapeError(os.str(), std::move(pairs));
    };
    if (!offending.empty()) raise(std::move(offending));

    // Canonical monotone representation: lift capped entries by a backward
    // running max. A lift needed at an uncapped entry is a genuine structure break.
    std::vector<int> tau(raw.begin(), raw.begin() + K);
    for (int i = K - 1; i >= 1; --i) {
        if (tau[i - 1] < tau[i]) {
            if (capped[i - 1]) tau[i - 1] = tau[i];
            else offending.emplace_back(i + 1, raw[i]);
        }
    }
    if (!offending.empty()) raise(std::move(offending));

    ThresholdPolicy tp;
    tp.params = params;
    tp.K = K;
    tp.tau = std::move(tau);
    tp.validate();
    return tp;
}

int delta_m_for_eval(double p, int d, double eps) {
    int base = Params::default_delta_m(p, d);
    if (p >= 1.0) return base;
    double need = 2.0 * d - 2.0 + std::log(1.0 / (eps * p * p)) / std::log(1.0 / (1.0 - p));
    return std::max(base, static_cast<int>(std::ceil(need)));
}

}  // namespace aoisched
