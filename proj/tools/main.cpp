#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "aoisched/log.hpp"
#include "aoisched/mdp.hpp"
#include "aoisched/policies.hpp"
#include "aoisched/renewal.hpp"
#include "aoisched/serialize.hpp"
#include "aoisched/sim.hpp"

namespace {

using namespace aoisched;

constexpr int kExitValidation = 2;
constexpr int kExitNoConvergence = 3;

Json base_manifest(const std::string& command) {
    Json m;
    m["schema_version"] = kSchemaVersion;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["command"] = command;
    return m;
}

std::vector<double> parse_grid(const std::string& text) {
    // "start:stop:step" or a comma-separated list
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        double start = 0, stop = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream is(text);
        if (!(is >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
            throw CLI::ValidationError("--p-grid", "expected start:stop:step");
        for (int k = 0;; ++k) {
            double v = start + k * step;
            if (v > stop + 1e-12) break;
            grid.push_back(v);
        }
    } else {
        std::istringstream is(text);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            if (!tok.empty()) grid.push_back(std::stod(tok));
        }
    }
    if (grid.empty()) throw CLI::ValidationError("--p-grid", "empty grid");
    return grid;
}

struct SolveArgs {
    double p = 0.5;
    int d = 2;
    int delta_m = 0;
    double tol = 1e-9;
    int max_iters = 100000;
    bool verify = false;
    std::string out = "policy";
    std::string debug_csv;
};

int cmd_solve(const SolveArgs& a) {
    Params params(a.p, a.d, a.delta_m);
    SolveConfig cfg;
    cfg.tol = a.tol;
    cfg.max_iters = a.max_iters;
    cfg.record_history = !a.debug_csv.empty();
    SolveDiagnostics diag;

    TabularPolicy policy = solve_structured(params, cfg, &diag);
    if (a.verify) {
        TabularPolicy plain = solve_rvi(params, cfg);
        if (plain.action_of != policy.action_of) {
            std::cerr << "verification FAILED: structured and plain action tables differ\n";
            return kExitNoConvergence;
        }
        if (std::abs(plain.avg_cost - policy.avg_cost) > 1e-8) {
            std::cerr << "verification FAILED: avg_cost differs by "
                      << std::abs(plain.avg_cost - policy.avg_cost) << "\n";
            return kExitNoConvergence;
        }
        std::cout << "verified: structured == plain\n";
    }
    ThresholdPolicy thr = extract_thresholds(policy);
    const double stationary = evaluate_stationary(policy);

    Json manifest = base_manifest("solve");
    manifest["args"] = {{"p", a.p},       {"d", a.d},     {"delta_m", params.delta_m},
                        {"tol", a.tol},   {"max_iters", a.max_iters},
                        {"verify", a.verify}, {"out", a.out}};

    Json jt = to_json(policy);
    jt["avg_cost_stationary"] = stationary;  // cross-check value; authoritative in reports
    jt["_manifest"] = manifest;
    save_json_file(a.out + ".tabular.json", jt);

    Json jq = to_json(thr);
    jq["avg_cost"] = stationary;
    jq["_manifest"] = manifest;
    save_json_file(a.out + ".threshold.json", jq);

    if (!a.debug_csv.empty()) {
        std::ostringstream it;
        it << "iter,span,sup\n";
        for (const auto& h : diag.history)
            it << h.iter << ',' << fmt_double(h.span) << ',' << fmt_double(h.sup) << '\n';
        write_file(a.debug_csv + ".iters.csv", it.str());
        std::ostringstream vs;
        vs << "delta,l,a,value,action\n";
        for (int idx = 0; idx < params.n_states(); ++idx) {
            State s = params.state_at(idx);
            vs << s.delta << ',' << s.l << ',' << s.a << ',' << fmt_double(policy.value_of[idx])
               << ',' << (policy.action_of[idx] == Action::Switch ? "switch" : "skip") << '\n';
        }
        write_file(a.debug_csv + ".values.csv", vs.str());
    }

    std::cout << "K=" << thr.K << " tau=";
    for (int i = 0; i < thr.K; ++i) std::cout << (i ? "," : "") << thr.tau[i];
    if (thr.K == 0) std::cout << "-";
    std::cout << " avg_cost=" << fmt_double(stationary) << " (drift " << fmt_double(policy.avg_cost)
              << ", " << diag.iterations << " sweeps)\n";
    return 0;
}

struct SimulateArgs {
    std::string spec;
    double p = 0.5;
    int d = 2;
    int delta_m = 0;
    long long T = 1000000;
    std::uint64_t seed = 1;
    long long epoch_cap = 1000000;
    std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
    Policy policy = parse_policy_spec(a.spec);
    SimConfig cfg;
    cfg.params = Params(a.p, a.d, a.delta_m);
    cfg.horizon_T = a.T;
    cfg.seed = a.seed;
    cfg.epoch_cap = a.epoch_cap;
    SimReport rep = simulate(policy, cfg);

    Json manifest = base_manifest("simulate");
    manifest["args"] = {{"policy", a.spec}, {"p", a.p},       {"d", a.d},
                        {"T", a.T},         {"seed", a.seed}, {"epoch_cap", a.epoch_cap}};
    auto colon = a.spec.find(':');
    if (colon != std::string::npos)
        manifest["inputs"] = {{a.spec.substr(colon + 1), hash_file(a.spec.substr(colon + 1))}};

    Json j = to_json(rep);
    j["_manifest"] = manifest;
    if (a.out.empty())
        std::cout << j.dump(2) << "\n";
    else
        save_json_file(a.out, j);
    return 0;
}

struct EvalArgs {
    std::string spec;
    double p = 0.5;
    int d = 2;
    int enum_cap = 30;
    std::string out;
};

int cmd_eval(const EvalArgs& a) {
    ThresholdPolicy tp;
    if (a.spec == "myopic") {
        tp = ThresholdPolicy::myopic(Params(a.p, a.d));
    } else {
        Policy pol = parse_policy_spec(a.spec);
        if (pol.kind == PolicyKind::Myopic) tp = ThresholdPolicy::myopic(Params(a.p, a.d));
        else if (pol.kind == PolicyKind::Threshold) tp = pol.threshold;
        else throw std::invalid_argument("eval: exact evaluation needs a threshold policy");
    }
    EpochStats st = eval_threshold_exact(tp, a.p, a.d, a.enum_cap);

    Json manifest = base_manifest("eval");
    manifest["args"] = {{"policy", a.spec}, {"p", a.p}, {"d", a.d}, {"enum_cap", a.enum_cap}};
    auto colon = a.spec.find(':');
    if (colon != std::string::npos)
        manifest["inputs"] = {{a.spec.substr(colon + 1), hash_file(a.spec.substr(colon + 1))}};

    Json j = to_json(st);
    j["avg_aoi_per_slot"] = st.avg_aoi_per_slot();
    j["_manifest"] = manifest;
    if (a.out.empty())
        std::cout << j.dump(2) << "\n";
    else
        save_json_file(a.out, j);
    return 0;
}

struct PolicymapArgs {
    double p = 0.5;
    int d = 2;
    int delta_m = 0;
    double tol = 1e-9;
    std::string out = "policymap";
};

int cmd_policymap(const PolicymapArgs& a) {
    Params params(a.p, a.d, a.delta_m);
    SolveConfig cfg;
    cfg.tol = a.tol;
    TabularPolicy policy = solve_structured(params, cfg);

    Json manifest = base_manifest("policymap");
    manifest["args"] = {{"p", a.p}, {"d", a.d}, {"delta_m", params.delta_m}, {"tol", a.tol}};
    const std::string mline = "manifest: " + manifest.dump();

    std::ostringstream st;
    st << "# " << mline << "\n";
    st << "delta,l,a,action\n";
    for (int idx = 0; idx < params.n_states(); ++idx) {
        State s = params.state_at(idx);
        st << s.delta << ',' << s.l << ',' << s.a << ','
           << (policy.action_of[idx] == Action::Switch ? "switch" : "skip") << '\n';
    }
    write_file(a.out + ".state.csv", st.str());

    std::ostringstream ep;
    ep << "# " << mline << "\n";
    ep << "i,j,action\n";
    for (int idx = 0; idx < params.n_states(); ++idx) {
        State s = params.state_at(idx);
        if (s.a != 1) continue;
        auto ec = epoch_coords(s, params);
        if (!ec) continue;
        ep << ec->i << ',' << ec->j << ','
           << (policy.action_of[idx] == Action::Switch ? "switch" : "skip") << '\n';
    }
    write_file(a.out + ".epoch.csv", ep.str());

    std::cout << "wrote " << a.out << ".state.csv and " << a.out << ".epoch.csv\n";
    return 0;
}

struct SweepArgs {
    std::string p_grid = "0.01:0.99:0.02";
    int d = 10;
    long long T = 1000000;
    std::uint64_t seed = 1;
    int jobs = 1;
    double tol = 1e-9;
    int delta_m = 0;
    long long epoch_cap = 1000000;
    std::string policies = "myopic,optimal";
    std::string out = "sweep.csv";
};

int cmd_sweep(const SweepArgs& a) {
    SweepConfig cfg;
    cfg.p_grid = parse_grid(a.p_grid);
    cfg.d = a.d;
    cfg.T = a.T;
    cfg.seed = a.seed;
    cfg.jobs = a.jobs;
    cfg.tol = a.tol;
    cfg.delta_m = a.delta_m;
    cfg.epoch_cap = a.epoch_cap;
    cfg.policies.clear();
    std::istringstream is(a.policies);
    std::string tok;
    while (std::getline(is, tok, ','))
        if (!tok.empty()) cfg.policies.push_back(tok);

    auto rows = sweep(cfg);

    Json manifest = base_manifest("sweep");
    manifest["args"] = {{"p_grid", a.p_grid}, {"d", a.d},       {"T", a.T},
                        {"seed", a.seed},     {"jobs", a.jobs}, {"tol", a.tol},
                        {"delta_m", a.delta_m}, {"policies", a.policies}};

    std::ostringstream os;
    write_sweep_csv(os, rows, "manifest: " + manifest.dump());
    write_file(a.out, os.str());
    std::cout << "wrote " << a.out << " (" << rows.size() << " rows)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Age-of-Information scheduling on a rate-limited link: average-cost MDP "
                 "solver, multi-threshold policies, exact renewal evaluation and Monte Carlo "
                 "simulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "solve the truncated MDP and extract thresholds");
    solve->add_option("--p", sa.p, "arrival probability per slot")->required();
    solve->add_option("--d", sa.d, "transmission duration in slots")->required();
    solve->add_option("--delta-m", sa.delta_m, "AoI truncation bound (0 = auto)");
    solve->add_option("--tol", sa.tol, "span convergence tolerance");
    solve->add_option("--max-iters", sa.max_iters, "iteration cap");
    solve->add_flag("--verify", sa.verify, "cross-check structured against plain RVI");
    solve->add_option("--out", sa.out, "output prefix for policy JSON files");
    solve->add_option("--debug-csv", sa.debug_csv, "prefix for per-iteration diagnostics CSV");

    SimulateArgs ma;
    auto* simu = app.add_subcommand("simulate", "Monte Carlo simulation of a policy");
    simu->add_option("policy", ma.spec,
                     "myopic | always-switch | threshold:<file.json> | tabular:<file.json>")
        ->required();
    simu->add_option("--p", ma.p, "arrival probability per slot")->required();
    simu->add_option("--d", ma.d, "transmission duration in slots")->required();
    simu->add_option("--delta-m", ma.delta_m, "AoI truncation bound (0 = auto)");
    simu->add_option("--T", ma.T, "horizon in slots");
    simu->add_option("--seed", ma.seed, "RNG seed");
    simu->add_option("--epoch-cap", ma.epoch_cap, "censoring cap on epoch length");
    simu->add_option("--out", ma.out, "write the report JSON here instead of stdout");

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "exact renewal evaluation of a threshold policy");
    eval->add_option("policy", ea.spec, "myopic | threshold:<file.json>")->required();
    eval->add_option("--p", ea.p, "arrival probability per slot")->required();
    eval->add_option("--d", ea.d, "transmission duration in slots")->required();
    eval->add_option("--enum-cap", ea.enum_cap, "largest tau_1 accepted for enumeration");
    eval->add_option("--out", ea.out, "write the stats JSON here instead of stdout");

    PolicymapArgs pa;
    auto* pmap = app.add_subcommand("policymap", "solve and dump state/epoch action maps as CSV");
    pmap->add_option("--p", pa.p, "arrival probability per slot")->required();
    pmap->add_option("--d", pa.d, "transmission duration in slots")->required();
    pmap->add_option("--delta-m", pa.delta_m, "AoI truncation bound (0 = auto)");
    pmap->add_option("--tol", pa.tol, "span convergence tolerance");
    pmap->add_option("--out", pa.out, "output prefix");

    SweepArgs wa;
    auto* swp = app.add_subcommand("sweep", "evaluate policies across an arrival-rate grid");
    swp->add_option("--p-grid", wa.p_grid, "start:stop:step or comma list");
    swp->add_option("--d", wa.d, "transmission duration in slots");
    swp->add_option("--T", wa.T, "simulation horizon per cell (0 = exact only)");
    swp->add_option("--seed", wa.seed, "base RNG seed, mixed with the grid index");
    swp->add_option("--jobs", wa.jobs, "concurrent sweep cells");
    swp->add_option("--tol", wa.tol, "solver tolerance");
    swp->add_option("--delta-m", wa.delta_m, "AoI truncation bound (0 = auto per point)");
    swp->add_option("--epoch-cap", wa.epoch_cap, "censoring cap on epoch length");
    swp->add_option("--policies", wa.policies, "comma list of myopic,optimal,always-switch");
    swp->add_option("--out", wa.out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*solve) return cmd_solve(sa);
        if (*simu) return cmd_simulate(ma);
        if (*eval) return cmd_eval(ea);
        if (*pmap) return cmd_policymap(pa);
        if (*swp) return cmd_sweep(wa);
    } catch (const SolveError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
