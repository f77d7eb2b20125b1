#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>
#include <variant>

#include "aoisched/core_types.hpp"
#include "aoisched/mdp.hpp"
#include "aoisched/policies.hpp"
#include "aoisched/renewal.hpp"
#include "aoisched/serialize.hpp"
#include "aoisched/sim.hpp"

namespace py = pybind11;
using namespace aoisched;

namespace {

Policy as_policy(const py::object& spec) {
    if (py::isinstance<py::str>(spec)) return parse_policy_spec(spec.cast<std::string>());
    if (py::isinstance<ThresholdPolicy>(spec))
        return Policy::from_threshold(spec.cast<ThresholdPolicy>());
    if (py::isinstance<TabularPolicy>(spec))
        return Policy::from_tabular(std::make_shared<TabularPolicy>(spec.cast<TabularPolicy>()));
    throw std::invalid_argument("policy must be a spec string, ThresholdPolicy or TabularPolicy");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Age-of-Information scheduling on a rate-limited link: average-cost MDP solver, "
              "multi-threshold policies, exact renewal evaluation and Monte Carlo simulation";
    m.attr("__version__") = kToolVersion;

    py::register_exception<SolveError>(m, "SolveError", PyExc_RuntimeError);
    py::register_exception<ShapeError>(m, "ShapeError", PyExc_RuntimeError);

    py::enum_<Action>(m, "Action")
        .value("SKIP", Action::Skip)
        .value("SWITCH", Action::Switch);

    py::class_<Params>(m, "Params")
        .def(py::init<double, int, int>(), py::arg("p"), py::arg("d"), py::arg("delta_m") = 0)
        .def_readonly("p", &Params::p)
        .def_readonly("d", &Params::d)
        .def_readonly("delta_m", &Params::delta_m)
        .def_static("default_delta_m", &Params::default_delta_m, py::arg("p"), py::arg("d"))
        .def("n_states", &Params::n_states)
        .def("__repr__", [](const Params& p) {
            std::ostringstream os;
            os << "Params(p=" << p.p << ", d=" << p.d << ", delta_m=" << p.delta_m << ")";
            return os.str();
        });

    py::class_<State>(m, "State")
        .def(py::init([](int delta, int l, int a) { return State{delta, l, a}; }),
             py::arg("delta"), py::arg("l"), py::arg("a"))
        .def_readwrite("delta", &State::delta)
        .def_readwrite("l", &State::l)
        .def_readwrite("a", &State::a)
        .def("__eq__", [](const State& s, const State& o) { return s == o; })
        .def("__repr__", [](const State& s) {
            std::ostringstream os;
            os << "State(delta=" << s.delta << ", l=" << s.l << ", a=" << s.a << ")";
            return os.str();
        });

    py::class_<TabularPolicy>(m, "TabularPolicy")
        .def_readonly("params", &TabularPolicy::params)
        .def_readonly("avg_cost", &TabularPolicy::avg_cost)
        .def("action", &TabularPolicy::action, py::arg("state"))
        .def("action_clamped", &TabularPolicy::action_clamped, py::arg("state"))
        .def("value", &TabularPolicy::value, py::arg("state"))
        .def("to_json", [](const TabularPolicy& p) { return to_json(p).dump(); })
        .def_static("from_json", [](const std::string& text) {
            return tabular_from_json(Json::parse(text));
        });

    py::class_<ThresholdPolicy>(m, "ThresholdPolicy")
        .def(py::init([](const Params& params, int K, std::vector<int> tau) {
                 ThresholdPolicy tp{params, K, std::move(tau)};
                 tp.validate();
                 return tp;
             }),
             py::arg("params"), py::arg("K"), py::arg("tau"))
        .def_static("myopic", &ThresholdPolicy::myopic, py::arg("params"))
        .def_readonly("params", &ThresholdPolicy::params)
        .def_readonly("K", &ThresholdPolicy::K)
        .def_readonly("tau", &ThresholdPolicy::tau)
        .def("allows_switch", &ThresholdPolicy::allows_switch, py::arg("i"), py::arg("j"))
        .def("to_json", [](const ThresholdPolicy& p) { return to_json(p).dump(); })
        .def_static("from_json", [](const std::string& text) {
            return threshold_from_json(Json::parse(text));
        })
        .def("__repr__", [](const ThresholdPolicy& tp) {
            std::ostringstream os;
            os << "ThresholdPolicy(K=" << tp.K << ", tau=[";
            for (int i = 0; i < tp.K; ++i) os << (i ? ", " : "") << tp.tau[i];
            os << "])";
            return os.str();
        });

    py::class_<SolveConfig>(m, "SolveConfig")
        .def(py::init([](double tol, int max_iters, double damping) {
                 SolveConfig cfg;
                 cfg.tol = tol;
                 cfg.max_iters = max_iters;
                 cfg.damping = damping;
                 return cfg;
             }),
             py::arg("tol") = 1e-9, py::arg("max_iters") = 100000, py::arg("damping") = 0.5)
        .def_readwrite("tol", &SolveConfig::tol)
        .def_readwrite("max_iters", &SolveConfig::max_iters)
        .def_readwrite("damping", &SolveConfig::damping);

    py::class_<EpochStats>(m, "EpochStats")
        .def_readonly("mean_x", &EpochStats::mean_x)
        .def_readonly("mean_x2", &EpochStats::mean_x2)
        .def_readonly("avg_aoi", &EpochStats::avg_aoi)
        .def("avg_aoi_per_slot", &EpochStats::avg_aoi_per_slot)
        .def("to_json", [](const EpochStats& st) { return to_json(st).dump(); })
        .def("__repr__", [](const EpochStats& st) {
            std::ostringstream os;
            os << "EpochStats(mean_x=" << st.mean_x << ", mean_x2=" << st.mean_x2
               << ", avg_aoi=" << st.avg_aoi << ")";
            return os.str();
        });

    py::class_<SimReport>(m, "SimReport")
        .def_readonly("avg_aoi", &SimReport::avg_aoi)
        .def_readonly("n_epochs", &SimReport::n_epochs)
        .def_readonly("emp_mean_x", &SimReport::emp_mean_x)
        .def_readonly("emp_mean_x2", &SimReport::emp_mean_x2)
        .def_readonly("censored", &SimReport::censored)
        .def("stderr_avg_aoi", &SimReport::stderr_avg_aoi)
        .def("to_json", [](const SimReport& r) { return to_json(r).dump(); });

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("p", &SweepRow::p)
        .def_readonly("policy", &SweepRow::policy)
        .def_readonly("avg_aoi", &SweepRow::avg_aoi)
        .def_readonly("gap_vs_myopic", &SweepRow::gap_vs_myopic)
        .def_readonly("n_epochs", &SweepRow::n_epochs)
        .def_readonly("censored", &SweepRow::censored);

    m.def("epoch_coords",
          [](const State& s, const Params& params) -> py::object {
              auto ec = epoch_coords(s, params);
              if (!ec) return py::none();
              return py::make_tuple(ec->i, ec->j);
          },
          py::arg("state"), py::arg("params"));

    m.def("transitions",
          [](const State& s, Action act, const Params& params) {
              auto tr = transitions(s, act, params);
              py::list out;
              for (const auto& t : tr) out.append(py::make_tuple(t.next, t.prob));
              return out;
          },
          py::arg("state"), py::arg("action"), py::arg("params"));

    m.def("cost", &cost, py::arg("state"), py::arg("action"), py::arg("d"));

    m.def("solve_rvi",
          [](const Params& params, const SolveConfig& cfg) { return solve_rvi(params, cfg); },
          py::arg("params"), py::arg("config") = SolveConfig{},
          py::call_guard<py::gil_scoped_release>());

    m.def("solve_structured",
          [](const Params& params, const SolveConfig& cfg) {
              return solve_structured(params, cfg);
          },
          py::arg("params"), py::arg("config") = SolveConfig{},
          py::call_guard<py::gil_scoped_release>());

    m.def("evaluate_stationary", &evaluate_stationary, py::arg("policy"),
          py::call_guard<py::gil_scoped_release>());

    m.def("extract_thresholds", &extract_thresholds, py::arg("policy"));

    m.def("delta_m_for_eval", &delta_m_for_eval, py::arg("p"), py::arg("d"),
          py::arg("eps") = 1e-10);

    m.def("myopic_closed_form", &myopic_closed_form, py::arg("p"), py::arg("d"));

    m.def("eval_threshold_exact",
          [](const ThresholdPolicy& tp, double p, int d, int enum_cap) {
              return eval_threshold_exact(tp, p, d, enum_cap);
          },
          py::arg("policy"), py::arg("p"), py::arg("d"), py::arg("enum_cap") = 30);

    m.def("decide",
          [](const py::object& spec, const State& s) { return decide(as_policy(spec), s); },
          py::arg("policy"), py::arg("state"));

    m.def("tabulate",
          [](const py::object& spec, const Params& params) {
              return tabulate(as_policy(spec), params);
          },
          py::arg("policy"), py::arg("params"));

    m.def("simulate",
          [](const py::object& spec, const Params& params, long long T, std::uint64_t seed,
             long long epoch_cap) {
              Policy pol = as_policy(spec);
              SimConfig cfg;
              cfg.params = params;
              cfg.horizon_T = T;
              cfg.seed = seed;
              cfg.epoch_cap = epoch_cap;
              py::gil_scoped_release release;
              return simulate(pol, cfg);
          },
          py::arg("policy"), py::arg("params"), py::arg("T") = 1000000, py::arg("seed") = 1,
          py::arg("epoch_cap") = 1000000);

    m.def("sweep",
          [](std::vector<double> p_grid, int d, std::vector<std::string> policies, long long T,
             std::uint64_t seed, int jobs, double tol, int delta_m) {
              SweepConfig cfg;
              cfg.p_grid = std::move(p_grid);
              cfg.d = d;
              cfg.policies = std::move(policies);
              cfg.T = T;
              cfg.seed = seed;
              cfg.jobs = jobs;
              cfg.tol = tol;
              cfg.delta_m = delta_m;
              py::gil_scoped_release release;
              return sweep(cfg);
          },
          py::arg("p_grid"), py::arg("d"),
          py::arg("policies") = std::vector<std::string>{"myopic", "optimal"},
          py::arg("T") = 0, py::arg("seed") = 1, py::arg("jobs") = 1, py::arg("tol") = 1e-9,
          py::arg("delta_m") = 0);
}
