#include "aoisched/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "aoisched/log.hpp"
#include "aoisched/mdp.hpp"
#include "aoisched/renewal.hpp"
#include "aoisched/serialize.hpp"

namespace aoisched {

double SimReport::stderr_avg_aoi() const {
    if (n_epochs < 2 || emp_mean_x <= 0.0) return std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(n_epochs);
    const double theta = emp_mean_r / emp_mean_x;
    // delta method on the ratio sum(R)/sum(X): Var(R - theta X) / (n E[X]^2)
    double s2 = emp_mean_r2 - 2.0 * theta * emp_mean_rx + theta * theta * emp_mean_x2;
    s2 = std::max(s2, 0.0);
    return std::sqrt(s2 / n) / emp_mean_x;
}

SimReport simulate(const Policy& policy, const SimConfig& cfg) {
    const Params& params = cfg.params;
    const double p = params.p;
    const int d = params.d;
    if (cfg.horizon_T < 1) throw std::invalid_argument("simulate: horizon_T must be >= 1");
    if (cfg.epoch_cap <= d) throw std::invalid_argument("simulate: epoch_cap must exceed d");
    if (policy.kind == PolicyKind::Tabular) {
        const Params& pp = policy.tabular->params;
        if (pp.p != p || pp.d != d)
            throw std::invalid_argument("simulate: tabular policy params do not match config");
    }

    SplitMix64 rng(cfg.seed);

    long long delta = d;  // AoI at the beginning of the slot
    int l = 0;            // age of the in-service update, 0 = idle
    long long i_svc = 0;  // epoch slot the in-service update arrived at
    long long j = 1;      // current epoch slot
    bool epoch_censored = false;

    // integer accumulators: per-slot costs are integers, so R(T) is exact
    unsigned long long total_r = 0, epoch_r = 0;
    long long n_epochs = 0, censored = 0;
    double sum_x = 0, sum_x2 = 0, sum_r = 0, sum_rx = 0, sum_r2 = 0;

    for (long long t = 1; t <= cfg.horizon_T; ++t) {
        const int a = rng.next_unit() < p ? 1 : 0;

        Action act;
        switch (policy.kind) {
            case PolicyKind::Myopic:
                act = (a == 1 && l == 0) ? Action::Switch : Action::Skip;
                break;
            case PolicyKind::AlwaysSwitch:
                act = a == 1 ? Action::Switch : Action::Skip;
                break;
            case PolicyKind::Threshold:
                // the epoch coordinates are tracked natively
                act = Action::Skip;
                if (a == 1) {
                    if (l == 0) act = Action::Switch;
                    else if (i_svc <= policy.threshold.K &&
                             j <= policy.threshold.tau[static_cast<std::size_t>(i_svc - 1)])
                        act = Action::Switch;
                }
                break;
            case PolicyKind::Tabular: {
                const int dm = policy.tabular->params.delta_m;
                State s{static_cast<int>(std::min<long long>(delta, dm)), l, a};
                act = policy.tabular->action_clamped(s);
                break;
            }
            default:
                act = Action::Skip;
        }

        if (l == d - 1 && act == Action::Skip) {
            // completion: AoI resets to d, the epoch ends at slot j
            total_r += static_cast<unsigned long long>(d);
            epoch_r += static_cast<unsigned long long>(d);
            if (epoch_censored) {
                ++censored;
            } else {
                ++n_epochs;
                const double x = static_cast<double>(j);
                const double r = static_cast<double>(epoch_r);
                sum_x += x;
                sum_x2 += x * x;
                sum_r += r;
                sum_rx += r * x;
                sum_r2 += r * r;
            }
            delta = d;
            l = 0;
            i_svc = 0;
            j = 1;
            epoch_r = 0;
            epoch_censored = false;
            continue;
        }

        const unsigned long long c = static_cast<unsigned long long>(delta) + 1;
        total_r += c;
        epoch_r += c;
        if (act == Action::Switch) {
            i_svc = j;
            l = 1;
        } else if (l > 0) {
            ++l;
        }
        ++delta;
        ++j;
        if (j > cfg.epoch_cap && !epoch_censored) epoch_censored = true;
    }

    SimReport rep;
    rep.avg_aoi = static_cast<double>(total_r) / static_cast<double>(cfg.horizon_T);
    rep.n_epochs = n_epochs;
    rep.censored = censored + (epoch_censored ? 1 : 0);
    if (n_epochs > 0) {
        const double n = static_cast<double>(n_epochs);
        rep.emp_mean_x = sum_x / n;
        rep.emp_mean_x2 = sum_x2 / n;
        rep.emp_mean_r = sum_r / n;
        rep.emp_mean_rx = sum_rx / n;
        rep.emp_mean_r2 = sum_r2 / n;
    }
    return rep;
}

namespace {

struct CellOutput {
    std::vector<SweepRow> rows;
};

void run_cell(const SweepConfig& cfg, std::size_t g, CellOutput& out) {
    const double p = cfg.p_grid[g];
    auto row = [&](const std::string& name, double avg, long long n_ep, long long cens) {
        out.rows.push_back({p, name, avg, 0.0, n_ep, cens});
    };

    bool want_optimal = false, want_always = false, want_myopic = false;
    for (const auto& name : cfg.policies) {
        if (name == "myopic") want_myopic = true;
        else if (name == "optimal") want_optimal = true;
        else if (name == "always-switch") want_always = true;
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    ThresholdPolicy opt;
    bool solved = false;
    if (want_optimal) {
        try {
            Params params(p, cfg.d, cfg.delta_m);
            SolveConfig scfg;
            scfg.tol = cfg.tol;
            opt = extract_thresholds(solve_structured(params, scfg));
            solved = true;
        } catch (const std::exception& e) {
            log_error("sweep: cell p=", p, " failed: ", e.what());
        }
    }

    // exact rows
    const double my_exact = myopic_closed_form(p, cfg.d).avg_aoi_per_slot();
    if (want_myopic) row("myopic", my_exact, 0, 0);
    if (want_optimal) {
        double v = nan;
        if (solved) {
            try {
                // wide cap: small p gives long always-switch prefixes, and the
                // factored enumeration stays O(tau_1^2)
                v = eval_threshold_exact(opt, p, cfg.d, /*enum_cap=*/1024).avg_aoi_per_slot();
            } catch (const std::exception& e) {
                log_error("sweep: exact eval at p=", p, " failed: ", e.what());
            }
        }
        row("optimal", v, 0, 0);
    }

    // simulated rows, common random numbers across policies at this cell
    if (cfg.T > 0) {
        SimConfig sim_cfg;
        sim_cfg.params = Params(p, cfg.d, cfg.delta_m);
        sim_cfg.horizon_T = cfg.T;
        sim_cfg.seed = SplitMix64::mix(cfg.seed, g);
        sim_cfg.epoch_cap = cfg.epoch_cap;

        double my_sim = nan;
        if (want_myopic || want_optimal || want_always) {
            SimReport r = simulate(Policy::myopic(), sim_cfg);
            my_sim = r.avg_aoi;
            if (want_myopic) row("myopic:sim", r.avg_aoi, r.n_epochs, r.censored);
        }
        if (want_optimal) {
            if (solved) {
                SimReport r = simulate(Policy::from_threshold(opt), sim_cfg);
                out.rows.push_back({p, "optimal:sim", r.avg_aoi, my_sim - r.avg_aoi,
                                    r.n_epochs, r.censored});
            } else {
                out.rows.push_back({p, "optimal:sim", nan, nan, 0, 0});
            }
        }
        if (want_always) {
            SimReport r = simulate(Policy::always_switch(), sim_cfg);
            out.rows.push_back({p, "always-switch:sim", r.avg_aoi, my_sim - r.avg_aoi,
                                r.n_epochs, r.censored});
        }
    }

    // gaps for the exact rows (myopic minus policy, same evaluation method)
    for (auto& r : out.rows) {
        if (r.policy == "optimal") r.gap_vs_myopic = my_exact - r.avg_aoi;
    }
}

}  // namespace

std::vector<SweepRow> sweep(const SweepConfig& cfg) {
    if (cfg.p_grid.empty()) throw std::invalid_argument("sweep: empty p grid");
    if (cfg.T > 0 && cfg.epoch_cap <= cfg.d)
        throw std::invalid_argument("sweep: epoch_cap must exceed d");
    for (double p : cfg.p_grid)
        Params(p, cfg.d, cfg.delta_m);  // validate the whole grid up front
    for (const auto& name : cfg.policies)
        if (name != "myopic" && name != "optimal" && name != "always-switch")
            throw std::invalid_argument("sweep: unsupported policy spec '" + name + "'");
    const std::size_t n = cfg.p_grid.size();
    std::vector<CellOutput> cells(n);
    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        for (std::size_t g = 0; g < n; ++g) run_cell(cfg, g, cells[g]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t nthreads = std::min(static_cast<std::size_t>(jobs), n);
        pool.reserve(nthreads);
        for (std::size_t t = 0; t < nthreads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t g = next.fetch_add(1);
                    if (g >= n) return;
                    run_cell(cfg, g, cells[g]);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    std::vector<SweepRow> rows;
    for (auto& c : cells)
        rows.insert(rows.end(), c.rows.begin(), c.rows.end());
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::string& manifest_line) {
    if (!manifest_line.empty()) out << "# " << manifest_line << "\n";
    out << "p,policy,avg_aoi,gap_vs_myopic,n_epochs,censored\n";
    for (const auto& r : rows) {
        out << fmt_double(r.p) << ',' << r.policy << ',' << fmt_double(r.avg_aoi) << ','
            << fmt_double(r.gap_vs_myopic) << ',' << r.n_epochs << ',' << r.censored << '\n';
    }
}

}  // namespace aoisched
